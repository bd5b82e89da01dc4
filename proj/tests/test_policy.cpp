#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "aoisim/network.hpp"
#include "aoisim/policy.hpp"

using namespace aoisim;

namespace {

Queued pkt(int id, double gen, double arrival = 0.0) { return Queued{id, gen, arrival, 0}; }

}  // namespace

TEST_CASE("any discipline starts service on an idle link") {
    for (PolicyKind kind : {PolicyKind::kPrmpLgfs, PolicyKind::kNonPrmpLgfs, PolicyKind::kFcfs,
                            PolicyKind::kNonPrmpLcfs, PolicyKind::kAgeLowerBound}) {
        LinkState st(kind, 1);
        CHECK(st.on_arrival(pkt(1, 3.0), 3.5) == LinkAction::kStartService);
        CHECK(st.busy());
        CHECK(st.in_service().packet == 1);
    }
}

TEST_CASE("preemptive freshest-first preempts on a fresher arrival") {
    LinkState st(PolicyKind::kPrmpLgfs, 10);
    st.on_arrival(pkt(1, 3.0), 3.0);
    CHECK(st.freshest_in_service() == 3.0);
    CHECK(st.on_arrival(pkt(2, 5.0), 5.0) == LinkAction::kPreemptAndStart);
    CHECK(st.in_service().packet == 2);
    CHECK(st.queue_size() == 1);  // preempted packet re-queued
    CHECK(st.preemptions() == 1);
    CHECK(st.drops() == 0);

    // staler arrival only queues
    CHECK(st.on_arrival(pkt(3, 4.0), 5.5) == LinkAction::kEnqueue);
    // equal generation time does not preempt
    CHECK(st.on_arrival(pkt(4, 5.0), 5.6) == LinkAction::kEnqueue);
}

TEST_CASE("preempted packet is dropped when the queue is full") {
    LinkState st(PolicyKind::kPrmpLgfs, 0);
    st.on_arrival(pkt(1, 3.0), 3.0);
    CHECK(st.on_arrival(pkt(2, 5.0), 5.0) == LinkAction::kPreemptAndStart);
    CHECK(st.queue_size() == 0);
    CHECK(st.drops() == 1);
    CHECK(st.on_arrival(pkt(3, 4.0), 5.5) == LinkAction::kDrop);
}

TEST_CASE("non-preemptive freshest-first replacement at a full buffer") {
    LinkState st(PolicyKind::kNonPrmpLgfs, 1);
    st.on_arrival(pkt(1, 1.0), 1.0);
    CHECK(st.on_arrival(pkt(2, 2.0), 2.0) == LinkAction::kEnqueue);
    CHECK(st.stalest_in_queue() == 2.0);
    // fresher than the stalest queued: replaces it
    CHECK(st.on_arrival(pkt(3, 4.0), 4.0) == LinkAction::kReplaceInQueue);
    CHECK(st.queue_size() == 1);
    CHECK(st.stalest_in_queue() == 4.0);
    CHECK(st.drops() == 1);
    // staler than everything queued: dropped
    CHECK(st.on_arrival(pkt(4, 3.0), 4.5) == LinkAction::kDrop);
    CHECK(st.stalest_in_queue() == 4.0);
    // no preemption ever
    CHECK(st.in_service().packet == 1);
}

TEST_CASE("fcfs drops the arriving packet when full") {
    LinkState st(PolicyKind::kFcfs, 1);
    st.on_arrival(pkt(1, 1.0), 1.0);
    CHECK(st.on_arrival(pkt(2, 2.0), 2.0) == LinkAction::kEnqueue);
    CHECK(st.on_arrival(pkt(3, 3.0), 3.0) == LinkAction::kDrop);
    CHECK(st.on_completion(4.0).next->packet == 2);
}

TEST_CASE("lcfs serves the newest link arrival and replaces the oldest") {
    LinkState st(PolicyKind::kNonPrmpLcfs, 2);
    st.on_arrival(pkt(1, 1.0, 1.0), 1.0);
    st.on_arrival(pkt(2, 2.0, 2.0), 2.0);
    st.on_arrival(pkt(3, 3.0, 3.0), 3.0);
    // full: packet 4 replaces packet 2 (oldest link arrival in queue)
    CHECK(st.on_arrival(pkt(4, 4.0, 4.0), 4.0) == LinkAction::kReplaceInQueue);
    auto first = st.on_completion(5.0);
    CHECK(first.delivered.packet == 1);
    CHECK(first.next->packet == 4);  // newest arrival first
    auto second = st.on_completion(6.0);
    CHECK(second.next->packet == 3);
}

TEST_CASE("freshest-first completion order") {
    LinkState st(PolicyKind::kNonPrmpLgfs, 10);
    st.on_arrival(pkt(9, 5.0), 5.0);  // in service
    st.on_arrival(pkt(1, 1.0), 5.1);
    st.on_arrival(pkt(3, 7.0), 5.2);
    st.on_arrival(pkt(2, 4.0), 5.3);
    auto comp = st.on_completion(6.0);
    CHECK(comp.delivered.packet == 9);
    CHECK(comp.next->gen == 7.0);
}

TEST_CASE("fifo completion order") {
    LinkState st(PolicyKind::kFcfs, 10);
    st.on_arrival(pkt(1, 9.0, 1.0), 1.0);
    st.on_arrival(pkt(2, 8.0, 1.5), 1.5);
    st.on_arrival(pkt(3, 7.0, 2.0), 2.0);
    CHECK(st.on_completion(3.0).next->packet == 2);  // earliest link arrival
}

TEST_CASE("completion with an empty queue idles the link") {
    LinkState st(PolicyKind::kNonPrmpLgfs, 1);
    st.on_arrival(pkt(1, 1.0), 1.0);
    auto comp = st.on_completion(2.0);
    CHECK(comp.delivered.packet == 1);
    CHECK_FALSE(comp.next.has_value());
    CHECK_FALSE(st.busy());
    CHECK_THROWS_AS(st.on_completion(3.0), std::logic_error);
}

TEST_CASE("equal generation times break ties toward the larger id") {
    LinkState st(PolicyKind::kNonPrmpLgfs, 10);
    st.on_arrival(pkt(1, 1.0), 1.0);
    st.on_arrival(pkt(2, 5.0), 1.1);
    st.on_arrival(pkt(3, 5.0), 1.2);
    CHECK(st.on_completion(2.0).next->packet == 3);
}

TEST_CASE("lgfs picks the maximum generation time at every decision point") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        LinkState st(PolicyKind::kNonPrmpLgfs, kInfiniteBuffer);
        std::vector<Queued> shadow;  // queued packets the oracle tracks
        double t = 0.0;
        int next_id = 1;
        st.on_arrival(pkt(next_id++, unit(rng) * 10), t);
        for (int step = 0; step < 60; ++step) {
            t += 0.1;
            if (unit(rng) < 0.6) {
                const Queued q = pkt(next_id++, unit(rng) * 10, t);
                const LinkAction action = st.on_arrival(q, t);
                if (action == LinkAction::kEnqueue) shadow.push_back(q);
            } else if (st.busy()) {
                auto comp = st.on_completion(t);
                if (comp.next) {
                    // oracle: maximum (gen, id) among tracked queued packets
                    auto best = std::max_element(
                        shadow.begin(), shadow.end(), [](const Queued& a, const Queued& b) {
                            if (a.gen != b.gen) return a.gen < b.gen;
                            return a.packet < b.packet;
                        });
                    CHECK(comp.next->packet == best->packet);
                    shadow.erase(best);
                }
            }
        }
    }
}

TEST_CASE("non-preemptive lgfs never evicts the freshest queued packet") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        LinkState st(PolicyKind::kNonPrmpLgfs, 2);
        double t = 0.0;
        int next_id = 1;
        for (int step = 0; step < 80; ++step) {
            t += 0.1;
            const double before = st.freshest_in_queue();
            if (unit(rng) < 0.7) {
                st.on_arrival(pkt(next_id++, unit(rng) * 10, t), t);
                if (before > -1.0) CHECK(st.freshest_in_queue() >= before);
            } else if (st.busy()) {
                st.on_completion(t);
            }
        }
    }
}

TEST_CASE("policy kind names round trip") {
    for (const std::string& name : policy_kind_names())
        CHECK(policy_kind_name(parse_policy_kind(name)) == name);
    CHECK_THROWS_WITH_AS(parse_policy_kind("lifo"),
                         "unknown policy kind 'lifo' (valid: prmp-lgfs, non-prmp-lgfs, fcfs, "
                         "non-prmp-lcfs, age-lb)",
                         std::invalid_argument);
}

TEST_CASE("policy labels") {
    PolicySpec spec;
    spec.kind = PolicyKind::kFcfs;
    CHECK(spec.display_label() == "fcfs");
    spec.buffer_override = 1;
    CHECK(spec.display_label() == "fcfs(B=1)");
    spec.buffer_override = kInfiniteBuffer;
    CHECK(spec.display_label() == "fcfs(B=inf)");
    spec.label = "custom";
    CHECK(spec.display_label() == "custom");
}

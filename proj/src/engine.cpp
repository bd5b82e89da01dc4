#include "aoisim/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <queue>
#include <stdexcept>

namespace aoisim {

const char* coupling_mode_name(CouplingMode mode) {
    switch (mode) {
        case CouplingMode::kIndependent: return "independent";
        case CouplingMode::kSharedDraws: return "shared_draws";
        case CouplingMode::kUniformization: return "uniformization";
    }
    return "?";
}

CouplingMode parse_coupling_mode(const std::string& name) {
    if (name == "independent") return CouplingMode::kIndependent;
    if (name == "shared_draws") return CouplingMode::kSharedDraws;
    if (name == "uniformization") return CouplingMode::kUniformization;
    throw std::invalid_argument(
        "unknown coupling mode '" + name +
        "' (valid: independent, shared_draws, uniformization)");
}

namespace {

enum EventKind : int { kCompletionEvent = 0, kTickEvent = 0, kArrivalEvent = 1 };

struct Event {
    double time = 0.0;
    int kind_prio = 0;  // completions and ticks before arrivals at equal time
    int entity = 0;     // link id, or gateway for arrivals
    std::uint64_t seq = 0;

    bool is_tick = false;
    std::uint64_t epoch = 0;    // completion validity token
    int packet_index = -1;      // arrivals
    int gateway = -1;

    bool operator>(const Event& other) const {
        if (time != other.time) return time > other.time;
        if (kind_prio != other.kind_prio) return kind_prio > other.kind_prio;
        if (entity != other.entity) return entity > other.entity;
        return seq > other.seq;
    }
};

struct ExternalArrival {
    double time;
    int gateway;
    int packet_index;
};

class Simulation {
  public:
    Simulation(const Network& net, const std::vector<Packet>& packets,
               const PolicySpec& policy, double horizon, std::uint64_t seed,
               const RunOptions& options)
        : net_(net), packets_(packets), policy_(policy), horizon_(horizon), seed_(seed),
          options_(options) {
        validate();
        init();
    }

    SimOutput execute() {
        while (!events_.empty()) {
            const Event ev = events_.top();
            if (ev.time > horizon_) break;
            events_.pop();
            now_ = ev.time;
            if (ev.packet_index >= 0)
                handle_external_arrival(ev);
            else if (ev.is_tick)
                handle_tick(ev);
            else
                handle_completion(ev);
        }
        return finish();
    }

  private:
    void validate() {
        if (!(horizon_ > 0.0)) throw std::invalid_argument("horizon must be positive");
        for (const auto& [key, kind] : policy_.per_link) {
            if (net_.find_link(key.first, key.second) < 0)
                throw std::invalid_argument("policy override names missing link (" +
                                            std::to_string(key.first) + "," +
                                            std::to_string(key.second) + ")");
            if ((kind == PolicyKind::kAgeLowerBound) !=
                (policy_.kind == PolicyKind::kAgeLowerBound))
                throw std::invalid_argument(
                    "the age-lb policy applies to the whole network and cannot be mixed");
        }
        if (policy_.kind == PolicyKind::kAgeLowerBound) {
            if (!net_.tree_restricted)
                throw std::invalid_argument(
                    "the age-lb policy requires a tree topology (one incoming link per node)");
            for (const LinkSpec& link : net_.links) {
                const int buffer = effective_buffer(link);
                if (buffer != kInfiniteBuffer && buffer < 1)
                    throw std::invalid_argument(
                        "the age-lb policy requires buffer >= 1 on every link");
            }
            if (options_.mode == CouplingMode::kUniformization)
                throw std::invalid_argument("the age-lb policy is not defined under "
                                            "uniformization");
        }
        if (options_.mode == CouplingMode::kUniformization) {
            for (const LinkSpec& link : net_.links)
                if (link.dist.kind != DistKind::kExponential)
                    throw std::invalid_argument(
                        "uniformization requires exponential distributions on every link");
        }
        int prev_id = 0;
        double prev_gen = 0.0;
        for (const Packet& pkt : packets_) {
            if (pkt.id <= prev_id)
                throw std::invalid_argument("packets must be sorted by increasing id");
            if (pkt.gen_time < prev_gen)
                throw std::invalid_argument("packet generation times must be non-decreasing");
            for (const auto& [g, a] : pkt.gw_arrival) {
                if (!net_.is_gateway(g))
                    throw std::invalid_argument("packet " + std::to_string(pkt.id) +
                                                " arrives at non-gateway node " +
                                                std::to_string(g));
                if (a < pkt.gen_time)
                    throw std::invalid_argument("packet " + std::to_string(pkt.id) +
                                                " arrives before it is generated");
            }
            prev_id = pkt.id;
            prev_gen = pkt.gen_time;
        }
    }

    int effective_buffer(const LinkSpec& link) const {
        return policy_.buffer_override ? *policy_.buffer_override : link.buffer;
    }

    PolicyKind effective_kind(const LinkSpec& link) const {
        auto it = policy_.per_link.find({link.from, link.to});
        return it == policy_.per_link.end() ? policy_.kind : it->second;
    }

    void init() {
        const int n_links = static_cast<int>(net_.links.size());
        links_.reserve(n_links);
        for (int i = 0; i < n_links; ++i)
            links_.emplace_back(effective_kind(net_.links[i]), effective_buffer(net_.links[i]));
        draw_count_.assign(n_links, 0);
        tick_count_.assign(n_links, 0);

        u_.assign(net_.node_count, 0.0);

        out_.policy_label = policy_.display_label();
        out_.policy_kind = policy_.kind;
        out_.seed = seed_;
        out_.salt = options_.salt;
        out_.mode = options_.mode;
        out_.horizon = horizon_;
        out_.deliveries.assign(net_.node_count, {});
        out_.u_trace.assign(net_.node_count, {});
        if (options_.record_service_durations) out_.service_durations.assign(n_links, {});

        arrivals_.clear();
        for (int idx = 0; idx < static_cast<int>(packets_.size()); ++idx)
            for (const auto& [g, a] : packets_[idx].gw_arrival)
                if (a <= horizon_) arrivals_.push_back({a, g, idx});
        std::sort(arrivals_.begin(), arrivals_.end(), [](const auto& a, const auto& b) {
            if (a.time != b.time) return a.time < b.time;
            if (a.packet_index != b.packet_index) return a.packet_index < b.packet_index;
            return a.gateway < b.gateway;
        });
        next_arrival_ = 0;
        push_next_arrival();

        if (options_.mode == CouplingMode::kUniformization)
            for (int i = 0; i < n_links; ++i) push_next_tick(i, 0.0);
    }

    void push_next_arrival() {
        if (next_arrival_ >= arrivals_.size()) return;
        const ExternalArrival& a = arrivals_[next_arrival_++];
        Event ev;
        ev.time = a.time;
        ev.kind_prio = kArrivalEvent;
        ev.entity = a.gateway;
        ev.seq = seq_++;
        ev.packet_index = a.packet_index;
        ev.gateway = a.gateway;
        events_.push(ev);
    }

    void push_next_tick(int link, double from) {
        const double gap =
            sample(net_.links[link].dist,
                   StreamKey{seed_, StreamPurpose::kTick, static_cast<std::uint64_t>(link),
                             tick_count_[link]++, options_.salt});
        const double t = from + gap;
        if (t > horizon_) return;
        Event ev;
        ev.time = t;
        ev.kind_prio = kTickEvent;
        ev.entity = link;
        ev.seq = seq_++;
        ev.is_tick = true;
        events_.push(ev);
    }

    void handle_external_arrival(const Event& ev) {
        push_next_arrival();
        const Packet& pkt = packets_[ev.packet_index];
        receive(ev.gateway, pkt.id, pkt.gen_time, ev.time);
    }

    // A packet reception at a node: log it, advance the freshest marker,
    // and make the packet available to every outgoing link. A node fed by
    // several paths receives (and forwards) a packet once per path; staler
    // copies never move the freshest marker.
    void receive(int node, int packet, double gen, double t) {
        out_.deliveries[node].push_back({packet, gen, t});
        if (gen > u_[node]) {
            u_[node] = gen;
            out_.u_trace[node].push_back({t, gen});
        }
        for (int li : net_.out_links[node]) offer(li, packet, gen, t);
    }

    void offer(int link, int packet, double gen, double t) {
        LinkState& st = links_[link];
        const Queued q{packet, gen, t, st.next_arrival_seq()};
        const LinkAction action = st.on_arrival(q, t);
        if (action == LinkAction::kStartService || action == LinkAction::kPreemptAndStart)
            begin_service(link, t);
        check_link(link);
    }

    // The in-service packet on `link` started at time t. Under age-lb
    // accounting the destination receives it now and the link merely stays
    // busy for the drawn transmission time.
    void begin_service(int link, double t) {
        LinkState& st = links_[link];
        if (st.kind() == PolicyKind::kAgeLowerBound)
            receive(net_.links[link].to, st.in_service().packet, st.in_service().gen, t);
        if (options_.mode == CouplingMode::kUniformization) return;  // ticks drive delivery
        const double x =
            sample(net_.links[link].dist,
                   StreamKey{seed_, StreamPurpose::kService, static_cast<std::uint64_t>(link),
                             draw_count_[link]++, options_.salt});
        Event ev;
        ev.time = t + x;
        ev.kind_prio = kCompletionEvent;
        ev.entity = link;
        ev.seq = seq_++;
        ev.epoch = st.service_epoch();
        events_.push(ev);
    }

    void handle_completion(const Event& ev) {
        LinkState& st = links_[ev.entity];
        if (!st.busy() || ev.epoch != st.service_epoch()) return;  // preempted service
        complete(ev.entity, ev.time);
    }

    void handle_tick(const Event& ev) {
        push_next_tick(ev.entity, ev.time);
        if (links_[ev.entity].busy()) complete(ev.entity, ev.time);
    }

    void complete(int link, double t) {
        LinkState& st = links_[link];
        const double started = st.service_start();
        const LinkState::Completion comp = st.on_completion(t);
        ++out_.completions;
        if (st.kind() != PolicyKind::kAgeLowerBound) {
            const Queued& d = comp.delivered;
            if (t < d.link_arrival)
                throw std::logic_error("delivery precedes the packet's arrival at the link");
            if (options_.record_service_durations)
                out_.service_durations[link].push_back(t - started);
            receive(net_.links[link].to, d.packet, d.gen, t);
        }
        if (comp.next) begin_service(link, t);
        check_link(link);
    }

    void check_link(int link) const {
        const LinkState& st = links_[link];
        if (!st.queue_empty() && !st.busy())
            throw std::logic_error("work-conservation violated on link " +
                                   std::to_string(link));
    }

    SimOutput finish() {
        for (const LinkState& st : links_) {
            out_.drops += st.drops();
            out_.preemptions += st.preemptions();
        }
        return std::move(out_);
    }

    const Network& net_;
    const std::vector<Packet>& packets_;
    const PolicySpec& policy_;
    const double horizon_;
    const std::uint64_t seed_;
    const RunOptions options_;

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
    std::vector<LinkState> links_;
    std::vector<std::uint64_t> draw_count_;
    std::vector<std::uint64_t> tick_count_;
    std::vector<ExternalArrival> arrivals_;
    std::size_t next_arrival_ = 0;
    std::vector<double> u_;
    std::uint64_t seq_ = 0;
    double now_ = 0.0;
    SimOutput out_;
};

}  // namespace

SimOutput run(const Network& net, const std::vector<Packet>& packets,
              const PolicySpec& policy, double horizon, std::uint64_t seed,
              const RunOptions& options) {
    Simulation sim(net, packets, policy, horizon, seed, options);
    return sim.execute();
}

std::vector<SimOutput> run_coupled(const Network& net, const std::vector<Packet>& packets,
                                   const std::vector<PolicySpec>& policies,
                                   CouplingMode mode, double horizon, std::uint64_t seed) {
    if (mode == CouplingMode::kSharedDraws)
        for (const PolicySpec& p : policies)
            if (p.preemptive())
                throw std::invalid_argument(
                    "shared_draws coupling requires non-preemptive policies");
    std::vector<SimOutput> outputs;
    outputs.reserve(policies.size());
    for (std::size_t i = 0; i < policies.size(); ++i) {
        RunOptions options;
        options.mode = mode;
        options.salt = mode == CouplingMode::kIndependent ? i + 1 : 0;
        outputs.push_back(run(net, packets, policies[i], horizon, seed, options));
    }
    return outputs;
}

void write_deliveries_csv(const SimOutput& out, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    file << "node,packet,gen_time,arrival_time\n";
    char buf[128];
    for (std::size_t node = 0; node < out.deliveries.size(); ++node)
        for (const Delivery& d : out.deliveries[node]) {
            std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g\n", node, d.packet, d.gen_time,
                          d.time);
            file << buf;
        }
}

void write_u_trace_csv(const SimOutput& out, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    file << "node,time,freshest_gen_time\n";
    char buf[96];
    for (std::size_t node = 0; node < out.u_trace.size(); ++node)
        for (const UPoint& p : out.u_trace[node]) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", node, p.t, p.u);
            file << buf;
        }
}

}  // namespace aoisim

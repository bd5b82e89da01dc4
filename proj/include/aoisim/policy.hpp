#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace aoisim {

enum class PolicyKind {
    kPrmpLgfs,      // preempt the in-service packet on a fresher arrival
    kNonPrmpLgfs,   // freshest-first, replaces the stalest queued packet when full
    kFcfs,          // arrival order, drops the arriving packet when full
    kNonPrmpLcfs,   // newest link arrival first, replaces the oldest-arrived when full
    kAgeLowerBound, // start-time accounting: destination gets the packet at
                    // service start while the link stays busy for the real
                    // transmission time; needs a tree topology and B >= 1
};

const char* policy_kind_name(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);  // throws listing valid kinds
std::vector<std::string> policy_kind_names();

struct PolicySpec {
    PolicyKind kind = PolicyKind::kNonPrmpLgfs;
    // Applied to every link when set (kInfiniteBuffer allowed); otherwise the
    // network's per-link buffers stand.
    std::optional<int> buffer_override;
    // Per-link discipline overrides; kAgeLowerBound cannot be mixed.
    std::map<std::pair<int, int>, PolicyKind> per_link;
    std::string label;  // CSV label; defaults to kind plus buffer suffix

    std::string display_label() const;
    bool preemptive() const { return kind == PolicyKind::kPrmpLgfs; }
    bool operator==(const PolicySpec&) const = default;
};

// A packet as a link sees it.
struct Queued {
    int packet = 0;
    double gen = 0.0;
    double link_arrival = 0.0;
    std::uint64_t arr_seq = 0;  // per-link arrival ordinal, breaks time ties
};

// What on_arrival did with the packet.
enum class LinkAction {
    kStartService,
    kEnqueue,
    kPreemptAndStart,
    kReplaceInQueue,
    kDrop,
};

const char* link_action_name(LinkAction action);

// Queue + server bookkeeping for one link under one discipline. Freshness
// order is (gen, packet id): larger id wins among equal generation times.
class LinkState {
  public:
    LinkState() = default;
    LinkState(PolicyKind kind, int buffer);

    // Decides and applies the discipline's arrival rule. When the result is
    // kStartService or kPreemptAndStart the packet has been placed in
    // service and the caller owns scheduling its completion.
    LinkAction on_arrival(const Queued& pkt, double now);

    // Removes the in-service packet and promotes the discipline's queue head,
    // or idles. Returns the delivered packet. Throws if the link was idle.
    struct Completion {
        Queued delivered;
        std::optional<Queued> next;  // placed in service at the same instant
    };
    Completion on_completion(double now);

    bool busy() const { return in_service_.has_value(); }
    const Queued& in_service() const { return *in_service_; }
    double service_start() const { return service_start_; }
    std::size_t queue_size() const { return fifo_.size() + by_gen_.size(); }
    bool queue_empty() const { return queue_size() == 0; }

    // Generation time of the in-service packet; -inf when idle.
    double freshest_in_service() const;
    // Smallest generation time in the queue; +inf when empty.
    double stalest_in_queue() const;
    // Largest generation time in the queue; -inf when empty.
    double freshest_in_queue() const;

    PolicyKind kind() const { return kind_; }
    int buffer() const { return buffer_; }

    std::uint64_t next_arrival_seq() { return arr_seq_++; }

    // Invalidation token for scheduled completions across preemptions.
    std::uint64_t service_epoch() const { return epoch_; }

    // Discarded packets (arrivals dropped, queue replacements, preempted
    // packets with no buffer space) and preemptions on this link.
    std::uint64_t drops() const { return drops_; }
    std::uint64_t preemptions() const { return preemptions_; }

  private:
    bool queue_full() const;
    void enqueue(const Queued& pkt);
    Queued pop_next();
    void start(const Queued& pkt, double now);

    PolicyKind kind_ = PolicyKind::kNonPrmpLgfs;
    int buffer_ = 0;
    std::optional<Queued> in_service_;
    double service_start_ = 0.0;
    std::uint64_t epoch_ = 0;
    std::uint64_t arr_seq_ = 0;
    std::uint64_t drops_ = 0;
    std::uint64_t preemptions_ = 0;

    // FCFS/LCFS keep link-arrival order; LGFS kinds keep freshness order.
    // A multiset because a node on several paths can queue the same packet
    // once per path.
    std::deque<Queued> fifo_;
    struct ByGen {
        bool operator()(const Queued& a, const Queued& b) const {
            if (a.gen != b.gen) return a.gen < b.gen;
            return a.packet < b.packet;
        }
    };
    std::multiset<Queued, ByGen> by_gen_;
};

}  // namespace aoisim

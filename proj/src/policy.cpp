#include "aoisim/policy.hpp"

#include "aoisim/network.hpp"

#include <limits>
#include <stdexcept>

namespace aoisim {

const char* policy_kind_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::kPrmpLgfs: return "prmp-lgfs";
        case PolicyKind::kNonPrmpLgfs: return "non-prmp-lgfs";
        case PolicyKind::kFcfs: return "fcfs";
        case PolicyKind::kNonPrmpLcfs: return "non-prmp-lcfs";
        case PolicyKind::kAgeLowerBound: return "age-lb";
    }
    return "?";
}

std::vector<std::string> policy_kind_names() {
    return {"prmp-lgfs", "non-prmp-lgfs", "fcfs", "non-prmp-lcfs", "age-lb"};
}

PolicyKind parse_policy_kind(const std::string& name) {
    if (name == "prmp-lgfs") return PolicyKind::kPrmpLgfs;
    if (name == "non-prmp-lgfs") return PolicyKind::kNonPrmpLgfs;
    if (name == "fcfs") return PolicyKind::kFcfs;
    if (name == "non-prmp-lcfs") return PolicyKind::kNonPrmpLcfs;
    if (name == "age-lb") return PolicyKind::kAgeLowerBound;
    std::string valid;
    for (const auto& n : policy_kind_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown policy kind '" + name + "' (valid: " + valid + ")");
}

const char* link_action_name(LinkAction action) {
    switch (action) {
        case LinkAction::kStartService: return "start_service";
        case LinkAction::kEnqueue: return "enqueue";
        case LinkAction::kPreemptAndStart: return "preempt_and_start";
        case LinkAction::kReplaceInQueue: return "replace_in_queue";
        case LinkAction::kDrop: return "drop";
    }
    return "?";
}

std::string PolicySpec::display_label() const {
    if (!label.empty()) return label;
    std::string s = policy_kind_name(kind);
    if (buffer_override) {
        s += "(B=";
        s += *buffer_override == kInfiniteBuffer ? "inf"
                                                         : std::to_string(*buffer_override);
        s += ")";
    }
    return s;
}

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

bool uses_gen_order(PolicyKind kind) {
    return kind == PolicyKind::kPrmpLgfs || kind == PolicyKind::kNonPrmpLgfs ||
           kind == PolicyKind::kAgeLowerBound;
}
}  // namespace

LinkState::LinkState(PolicyKind kind, int buffer) : kind_(kind), buffer_(buffer) {}

bool LinkState::queue_full() const {
    if (buffer_ == kInfiniteBuffer) return false;
    return static_cast<int>(queue_size()) >= buffer_;
}

void LinkState::enqueue(const Queued& pkt) {
    if (uses_gen_order(kind_))
        by_gen_.insert(pkt);
    else
        fifo_.push_back(pkt);
}

Queued LinkState::pop_next() {
    if (uses_gen_order(kind_)) {
        auto it = std::prev(by_gen_.end());  // freshest
        Queued q = *it;
        by_gen_.erase(it);
        return q;
    }
    if (kind_ == PolicyKind::kFcfs) {
        Queued q = fifo_.front();
        fifo_.pop_front();
        return q;
    }
    Queued q = fifo_.back();  // LCFS: newest link arrival
    fifo_.pop_back();
    return q;
}

void LinkState::start(const Queued& pkt, double now) {
    in_service_ = pkt;
    service_start_ = now;
    ++epoch_;
}

LinkAction LinkState::on_arrival(const Queued& pkt, double now) {
    if (!busy()) {
        start(pkt, now);
        return LinkAction::kStartService;
    }
    switch (kind_) {
        case PolicyKind::kPrmpLgfs: {
            if (pkt.gen > in_service_->gen) {
                const Queued preempted = *in_service_;
                ++preemptions_;
                if (queue_full())
                    ++drops_;  // preempted packet has nowhere to go
                else
                    enqueue(preempted);
                start(pkt, now);
                return LinkAction::kPreemptAndStart;
            }
            if (queue_full()) {
                ++drops_;
                return LinkAction::kDrop;
            }
            enqueue(pkt);
            return LinkAction::kEnqueue;
        }
        case PolicyKind::kNonPrmpLgfs:
        case PolicyKind::kAgeLowerBound: {
            if (!queue_full()) {
                enqueue(pkt);
                return LinkAction::kEnqueue;
            }
            if (!by_gen_.empty() && pkt.gen > by_gen_.begin()->gen) {
                by_gen_.erase(by_gen_.begin());  // stalest queued makes room
                ++drops_;
                enqueue(pkt);
                return LinkAction::kReplaceInQueue;
            }
            ++drops_;
            return LinkAction::kDrop;
        }
        case PolicyKind::kFcfs: {
            if (queue_full()) {
                ++drops_;
                return LinkAction::kDrop;
            }
            enqueue(pkt);
            return LinkAction::kEnqueue;
        }
        case PolicyKind::kNonPrmpLcfs: {
            if (queue_full()) {
                if (fifo_.empty()) {
                    ++drops_;
                    return LinkAction::kDrop;
                }
                fifo_.pop_front();  // oldest link arrival leaves
                ++drops_;
                fifo_.push_back(pkt);
                return LinkAction::kReplaceInQueue;
            }
            enqueue(pkt);
            return LinkAction::kEnqueue;
        }
    }
    throw std::logic_error("unhandled policy kind");
}

LinkState::Completion LinkState::on_completion(double now) {
    if (!busy()) throw std::logic_error("service completion on an idle link");
    Completion result;
    result.delivered = *in_service_;
    in_service_.reset();
    ++epoch_;
    if (!queue_empty()) {
        const Queued next = pop_next();
        start(next, now);
        result.next = next;
    }
    return result;
}

double LinkState::freshest_in_service() const {
    return busy() ? in_service_->gen : kNegInf;
}

double LinkState::stalest_in_queue() const {
    if (uses_gen_order(kind_))
        return by_gen_.empty() ? kPosInf : by_gen_.begin()->gen;
    double smallest = kPosInf;
    for (const Queued& q : fifo_) smallest = std::min(smallest, q.gen);
    return smallest;
}

double LinkState::freshest_in_queue() const {
    if (uses_gen_order(kind_))
        return by_gen_.empty() ? kNegInf : std::prev(by_gen_.end())->gen;
    double largest = kNegInf;
    for (const Queued& q : fifo_) largest = std::max(largest, q.gen);
    return largest;
}

}  // namespace aoisim

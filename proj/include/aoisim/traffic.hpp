#pragma once

#include <string>
#include <vector>

#include "aoisim/dist.hpp"
#include "aoisim/network.hpp"

namespace aoisim {

// Exogenous update-packet process: generation epochs plus the delay each
// packet experiences before reaching a gateway. Delays may reorder packets
// (a later-generated packet can arrive at the gateway first).
struct TrafficSpec {
    enum class Gen { kRenewal, kTrace };
    enum class Delay { kZero, kTwoPoint, kDist };

    Gen gen = Gen::kRenewal;
    DistSpec inter_gen = DistSpec::deterministic(1.0);
    std::string trace_path;

    Delay delay = Delay::kZero;
    double two_point_d1 = 0.0;
    double two_point_d2 = 0.0;
    double two_point_p = 0.5;
    DistSpec delay_dist;

    double horizon = 0.0;

    bool operator==(const TrafficSpec&) const = default;
};

// Packets with gen_time <= horizon, ids assigned in generation order
// starting at 1. Delay draws are keyed per (gateway, packet), so every
// gateway in `gateways` receives its own arrival stream.
std::vector<Packet> generate(const TrafficSpec& spec, const std::vector<int>& gateways,
                             std::uint64_t seed);

// CSV trace, header id,gen_time,gateway,arrival_time; one row per
// (packet, gateway). Rows must be sorted by id. Load validates the packet
// invariants (non-decreasing gen times, arrival >= generation).
void save_trace(const std::vector<Packet>& packets, const std::string& path);
std::vector<Packet> load_trace(const std::string& path);

}  // namespace aoisim

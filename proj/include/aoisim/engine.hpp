#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoisim/network.hpp"
#include "aoisim/policy.hpp"
#include "aoisim/traffic.hpp"

namespace aoisim {

enum class CouplingMode {
    kIndependent,     // fresh streams per policy
    kSharedDraws,     // k-th service on a link consumes the k-th draw in every policy
    kUniformization,  // shared Poisson ticks per link; busy links deliver at ticks
};

const char* coupling_mode_name(CouplingMode mode);
CouplingMode parse_coupling_mode(const std::string& name);

struct Delivery {
    int packet = 0;
    double gen_time = 0.0;
    double time = 0.0;  // reception epoch at the node
};

struct UPoint {
    double t = 0.0;
    double u = 0.0;  // new value of the freshest-received generation time
};

struct SimOutput {
    std::string policy_label;
    PolicyKind policy_kind = PolicyKind::kNonPrmpLgfs;
    std::uint64_t seed = 0;
    std::uint64_t salt = 0;
    CouplingMode mode = CouplingMode::kSharedDraws;
    double horizon = 0.0;

    // First reception of each packet at each node, in reception order.
    std::vector<std::vector<Delivery>> deliveries;
    // Breakpoints of the freshest-received step function per node; the
    // implicit initial value is 0 at t = 0.
    std::vector<std::vector<UPoint>> u_trace;

    std::uint64_t drops = 0;
    std::uint64_t preemptions = 0;
    std::uint64_t completions = 0;

    // (start, duration) of completed services per link; only filled when
    // RunOptions::record_service_durations is set.
    std::vector<std::vector<double>> service_durations;
};

struct RunOptions {
    CouplingMode mode = CouplingMode::kSharedDraws;
    std::uint64_t salt = 0;
    bool record_service_durations = false;
};

// One event-driven execution to the horizon. Deterministic given
// (network, packets, policy, horizon, seed, options).
SimOutput run(const Network& net, const std::vector<Packet>& packets,
              const PolicySpec& policy, double horizon, std::uint64_t seed,
              const RunOptions& options = {});

// Runs every policy on the same traffic under the requested coupling.
// shared_draws requires non-preemptive policies; uniformization requires
// exponential links throughout.
std::vector<SimOutput> run_coupled(const Network& net, const std::vector<Packet>& packets,
                                   const std::vector<PolicySpec>& policies,
                                   CouplingMode mode, double horizon, std::uint64_t seed);

void write_deliveries_csv(const SimOutput& out, const std::string& path);
void write_u_trace_csv(const SimOutput& out, const std::string& path);

}  // namespace aoisim

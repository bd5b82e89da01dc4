#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aoisim/engine.hpp"
#include "aoisim/network.hpp"

namespace aoisim {

// Right-continuous sawtooth: age 0 at t = 0, slope exactly 1 between
// resets, reset k drops the value to `age_after` at time `t`.
struct AgeTrace {
    int node = 0;
    double horizon = 0.0;
    struct Reset {
        double t;
        double age_after;
    };
    std::vector<Reset> resets;

    double age_at(double t) const;
};

// Builds the sawtooth from a time-sorted reception log: a reset happens at
// each informative reception (one whose generation time beats everything
// received before), receptions of staler packets change nothing.
AgeTrace age_trace(const std::vector<Delivery>& deliveries, int node, double horizon);

// (1/T) * integral of the sawtooth, exact trapezoid sum.
double time_average(const AgeTrace& trace);

// Mean of the age just before each reset. Throws when the trace has no
// resets (an unfinished ramp at the horizon is not a peak).
double average_peak(const AgeTrace& trace);

struct PenaltySpec {
    enum class Kind { kFloor, kExp, kIndicator };
    Kind kind = Kind::kFloor;
    double threshold = 0.0;  // indicator only
};

// (1/T) * integral of h(age), closed form per linear segment.
double penalty(const AgeTrace& trace, const PenaltySpec& h);

// The age lower bound produced by the start-time relaxation policy: the
// ordinary age formula applied to its reception epochs.
AgeTrace lower_bound_trace(const SimOutput& lb_output, int node);

struct GapReport {
    int node = 0;
    double empirical_gap = 0.0;   // time_average(policy) - time_average(bound)
    double analytic_bound = 0.0;  // E[X_1] + 2 * sum_{m>=2} E[X_m] along the path
    std::vector<int> hop_path;
    std::vector<double> link_means;
};

GapReport gap_report(const AgeTrace& policy_trace, const AgeTrace& bound_trace,
                     const Network& net, const std::vector<int>& path_to_node);

// Exact pathwise comparison of the freshest-received processes of two
// coupled runs: checks candidate >= reference at every merged breakpoint
// of every node. Requires outputs from the same seed under a shared-
// randomness mode.
struct SamplewiseReport {
    std::uint64_t points_checked = 0;
    std::uint64_t violations = 0;
    double worst_gap = 0.0;  // max of reference - candidate over violations
    int worst_node = -1;
    double worst_time = 0.0;
};

SamplewiseReport samplewise_dominance(const SimOutput& candidate, const SimOutput& reference);

// Empirical exceedance comparison over independent replications with
// two-sided DKW bands. candidate <=st reference predicts
// P[age_c(t) > x] <= P[age_r(t) > x]; a finding requires the band to be
// exceeded at two or more adjacent thresholds (discretization noise gate).
struct DistributionalReport {
    bool holds = true;
    std::uint64_t flagged_cells = 0;
    std::uint64_t violations = 0;  // adjacent-pair confirmed findings
    double worst_excess = 0.0;
    double band = 0.0;
};

DistributionalReport distributional_dominance(const std::vector<AgeTrace>& candidate_runs,
                                              const std::vector<AgeTrace>& reference_runs,
                                              const std::vector<double>& probe_times,
                                              const std::vector<double>& thresholds,
                                              double confidence = 0.999);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

MeanSe mean_se(const std::vector<double>& values);

}  // namespace aoisim

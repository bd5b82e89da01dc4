#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aoisim/engine.hpp"
#include "aoisim/metrics.hpp"
#include "aoisim/network.hpp"
#include "aoisim/policy.hpp"
#include "aoisim/traffic.hpp"

namespace aoisim {

struct MetricSel {
    enum class Kind { kTimeAvg, kAvgPeak, kPenaltyFloor, kPenaltyExp, kPenaltyIndicator };
    Kind kind = Kind::kTimeAvg;
    double threshold = 0.0;  // indicator penalty only

    std::string label() const;
    bool operator==(const MetricSel&) const = default;
};

MetricSel parse_metric(const std::string& name);

struct SweepSpec {
    enum class Var {
        kNone,
        kLambda,  // generation rate: inter-generation mean becomes 1/lambda
        kBeta,    // gamma shape on every gamma link, per-link mean preserved
    };
    Var var = Var::kNone;
    std::vector<double> grid;

    bool operator==(const SweepSpec&) const = default;
};

struct ExperimentConfig {
    NetworkSpec network;
    TrafficSpec traffic;  // horizon mirrors the top-level horizon
    std::vector<PolicySpec> policies;
    CouplingMode coupling = CouplingMode::kIndependent;
    double horizon = 0.0;
    int replications = 1;
    std::uint64_t seed = 1;
    std::vector<MetricSel> metrics;
    std::vector<int> nodes;  // nodes whose metrics are reported
    SweepSpec sweep;
    std::string out_dir = ".";
};

// JSON <-> config. parse_config throws std::invalid_argument with the
// offending JSON path in the message; round-trips are exact.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

// Cross-field validation (node references, grids, replication count);
// builds the network to surface topology errors.
void validate_config(const ExperimentConfig& config);

// Returns the config with the sweep variable applied at `value`.
ExperimentConfig at_sweep_point(const ExperimentConfig& config, double value);

DistSpec dist_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json dist_to_json(const DistSpec& dist);

// Built-in experiment presets: fig5, fig6, fig7.
ExperimentConfig make_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace aoisim

#pragma once

#include <string>
#include <vector>

#include "aoisim/config.hpp"

namespace aoisim {

struct MetricRow {
    std::string run_id;  // "<var>=<value>/rep<k>" under a sweep, "rep<k>" otherwise
    std::uint64_t seed = 0;
    int node = 0;
    std::string policy;
    std::string metric;
    double value = 0.0;

    bool operator==(const MetricRow&) const = default;
};

enum class Parallelism {
    kSerial,  // reference implementation, one task at a time
    kOpenMp,  // replication/sweep tasks across threads, identical output
};

// Expands the config into (sweep point x replication) tasks, runs every
// policy of each task on shared traffic, and returns one row per
// (task, policy, node, metric) in a thread-count-independent order.
// Replication k uses seed config.seed + k; sweep points and policies reuse
// the replication's seed, which pairs their randomness.
std::vector<MetricRow> run_batch(const ExperimentConfig& config,
                                 Parallelism parallelism = Parallelism::kOpenMp);

// Sweep-point label used in run ids ("%.10g" of the grid value).
std::string sweep_point_label(const ExperimentConfig& config, std::size_t sweep_index);

struct AggregateRow {
    std::string sweep_label;  // "" when the config has no sweep
    double sweep_value = 0.0;
    int node = 0;
    std::string policy;
    std::string metric;
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

// Per-(sweep point, policy, node, metric) mean and standard error over
// replications; NaN rows are excluded from the aggregate but counted.
std::vector<AggregateRow> aggregate(const ExperimentConfig& config,
                                    const std::vector<MetricRow>& rows);

// Written once, atomically (temp file + rename), byte-deterministic.
void write_metrics_csv(const std::vector<MetricRow>& rows, const std::string& path);
void write_aggregate_csv(const std::vector<AggregateRow>& rows, const std::string& path);

}  // namespace aoisim

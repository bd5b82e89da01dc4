#include "aoisim/runner.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aoisim {

namespace {

struct Task {
    int sweep_index;  // -1 without a sweep
    int rep;
};

double metric_value(const AgeTrace& trace, const MetricSel& sel) {
    switch (sel.kind) {
        case MetricSel::Kind::kTimeAvg:
            return time_average(trace);
        case MetricSel::Kind::kAvgPeak:
            try {
                return average_peak(trace);
            } catch (const std::invalid_argument&) {
                return std::nan("");  // no reset within the horizon
            }
        case MetricSel::Kind::kPenaltyFloor:
            return penalty(trace, {PenaltySpec::Kind::kFloor, 0.0});
        case MetricSel::Kind::kPenaltyExp:
            return penalty(trace, {PenaltySpec::Kind::kExp, 0.0});
        case MetricSel::Kind::kPenaltyIndicator:
            return penalty(trace, {PenaltySpec::Kind::kIndicator, sel.threshold});
    }
    return std::nan("");
}

std::vector<MetricRow> run_task(const ExperimentConfig& base, const Task& task) {
    const ExperimentConfig config =
        task.sweep_index < 0 ? base
                             : at_sweep_point(base, base.sweep.grid[task.sweep_index]);
    const Network net = build_network(config.network);
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(task.rep);
    const std::vector<Packet> packets = generate(config.traffic, net.gateways, seed);

    std::string run_id;
    if (task.sweep_index >= 0)
        run_id = sweep_point_label(base, task.sweep_index) + "/rep" + std::to_string(task.rep);
    else
        run_id = "rep" + std::to_string(task.rep);

    std::vector<MetricRow> rows;
    rows.reserve(config.policies.size() * config.nodes.size() * config.metrics.size());
    for (std::size_t i = 0; i < config.policies.size(); ++i) {
        RunOptions options;
        options.mode = config.coupling;
        options.salt = config.coupling == CouplingMode::kIndependent ? i + 1 : 0;
        const SimOutput out = run(net, packets, config.policies[i], config.horizon, seed,
                                  options);
        for (int node : config.nodes) {
            const AgeTrace trace = age_trace(out.deliveries[node], node, config.horizon);
            for (const MetricSel& sel : config.metrics)
                rows.push_back({run_id, seed, node, out.policy_label, sel.label(),
                                metric_value(trace, sel)});
        }
    }
    return rows;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move " + tmp + " to " + path);
}

}  // namespace

std::string sweep_point_label(const ExperimentConfig& config, std::size_t sweep_index) {
    const char* var = config.sweep.var == SweepSpec::Var::kLambda ? "lambda" : "beta";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.10g", var, config.sweep.grid[sweep_index]);
    return buf;
}

std::vector<MetricRow> run_batch(const ExperimentConfig& config, Parallelism parallelism) {
    validate_config(config);
    std::vector<Task> tasks;
    const int sweep_points =
        config.sweep.var == SweepSpec::Var::kNone
            ? 1
            : static_cast<int>(config.sweep.grid.size());
    for (int s = 0; s < sweep_points; ++s)
        for (int r = 0; r < config.replications; ++r)
            tasks.push_back({config.sweep.var == SweepSpec::Var::kNone ? -1 : s, r});

    std::vector<std::vector<MetricRow>> per_task(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    const int n_tasks = static_cast<int>(tasks.size());

    if (parallelism == Parallelism::kOpenMp) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n_tasks; ++i) {
            try {
                per_task[i] = run_task(config, tasks[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        for (int i = 0; i < n_tasks; ++i) {
            try {
                per_task[i] = run_task(config, tasks[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<MetricRow> rows;
    for (auto& chunk : per_task)
        rows.insert(rows.end(), chunk.begin(), chunk.end());
    return rows;
}

std::vector<AggregateRow> aggregate(const ExperimentConfig& config,
                                    const std::vector<MetricRow>& rows) {
    std::map<std::string, std::pair<int, double>> sweep_lookup;
    if (config.sweep.var != SweepSpec::Var::kNone)
        for (std::size_t i = 0; i < config.sweep.grid.size(); ++i)
            sweep_lookup[sweep_point_label(config, i)] = {static_cast<int>(i),
                                                          config.sweep.grid[i]};

    using Key = std::tuple<int, int, std::string, std::string>;  // sweep idx, node, policy, metric
    std::map<Key, std::vector<double>> groups;
    std::map<Key, std::pair<std::string, double>> labels;
    for (const MetricRow& row : rows) {
        int sweep_index = -1;
        std::string sweep_label;
        double sweep_value = 0.0;
        const auto slash = row.run_id.find('/');
        if (slash != std::string::npos) {
            sweep_label = row.run_id.substr(0, slash);
            const auto it = sweep_lookup.find(sweep_label);
            if (it != sweep_lookup.end()) {
                sweep_index = it->second.first;
                sweep_value = it->second.second;
            }
        }
        const Key key{sweep_index, row.node, row.policy, row.metric};
        if (!std::isnan(row.value)) groups[key].push_back(row.value);
        labels.emplace(key, std::make_pair(sweep_label, sweep_value));
    }

    std::vector<AggregateRow> out;
    for (const auto& [key, values] : groups) {
        const MeanSe stats = mean_se(values);
        AggregateRow row;
        row.sweep_label = labels[key].first;
        row.sweep_value = labels[key].second;
        row.node = std::get<1>(key);
        row.policy = std::get<2>(key);
        row.metric = std::get<3>(key);
        row.mean = stats.mean;
        row.se = stats.se;
        row.n = stats.n;
        out.push_back(std::move(row));
    }
    return out;
}

void write_metrics_csv(const std::vector<MetricRow>& rows, const std::string& path) {
    std::string content = "run_id,seed,node,policy,metric,value\n";
    char buf[256];
    for (const MetricRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%s,%llu,%d,%s,%s,%.10g\n", row.run_id.c_str(),
                      static_cast<unsigned long long>(row.seed), row.node, row.policy.c_str(),
                      row.metric.c_str(), row.value);
        content += buf;
    }
    atomic_write(path, content);
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, const std::string& path) {
    std::string content = "sweep,sweep_value,node,policy,metric,mean,se,n\n";
    char buf[320];
    for (const AggregateRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.10g,%d,%s,%s,%.10g,%.10g,%zu\n",
                      row.sweep_label.c_str(), row.sweep_value, row.node, row.policy.c_str(),
                      row.metric.c_str(), row.mean, row.se, row.n);
        content += buf;
    }
    atomic_write(path, content);
}

}  // namespace aoisim

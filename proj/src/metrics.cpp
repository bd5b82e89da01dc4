#include "aoisim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoisim {

double AgeTrace::age_at(double t) const {
    // last reset at or before t; before the first reset the age is t itself
    auto it = std::upper_bound(resets.begin(), resets.end(), t,
                               [](double value, const Reset& r) { return value < r.t; });
    if (it == resets.begin()) return t;
    --it;
    return it->age_after + (t - it->t);
}

AgeTrace age_trace(const std::vector<Delivery>& deliveries, int node, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    AgeTrace trace;
    trace.node = node;
    trace.horizon = horizon;
    double freshest = 0.0;  // generation time 0 at t = 0^-
    double prev_time = 0.0;
    for (const Delivery& d : deliveries) {
        if (d.time < prev_time)
            throw std::invalid_argument("delivery log must be sorted by time");
        prev_time = d.time;
        if (d.time > horizon) break;
        if (d.gen_time > freshest) {
            freshest = d.gen_time;
            trace.resets.push_back({d.time, d.time - d.gen_time});
        }
    }
    return trace;
}

double time_average(const AgeTrace& trace) {
    double area = 0.0;
    double t = 0.0;
    double value = 0.0;
    for (const AgeTrace::Reset& r : trace.resets) {
        const double dt = r.t - t;
        area += dt * (value + 0.5 * dt);
        t = r.t;
        value = r.age_after;
    }
    const double dt = trace.horizon - t;
    area += dt * (value + 0.5 * dt);
    return area / trace.horizon;
}

double average_peak(const AgeTrace& trace) {
    if (trace.resets.empty()) throw std::invalid_argument("no peaks in horizon");
    double t = 0.0;
    double value = 0.0;
    double sum = 0.0;
    for (const AgeTrace::Reset& r : trace.resets) {
        sum += value + (r.t - t);
        t = r.t;
        value = r.age_after;
    }
    return sum / static_cast<double>(trace.resets.size());
}

namespace {

// integral of floor(u) du over [0, y]
double floor_antiderivative(double y) {
    const double n = std::floor(y);
    return 0.5 * n * (n - 1.0) + n * (y - n);
}

// integral of h over one linear segment where the age runs from a to b
double segment_penalty(double a, double b, const PenaltySpec& h) {
    switch (h.kind) {
        case PenaltySpec::Kind::kFloor:
            return floor_antiderivative(b) - floor_antiderivative(a);
        case PenaltySpec::Kind::kExp:
            return std::exp(b) - std::exp(a);
        case PenaltySpec::Kind::kIndicator:
            return std::max(0.0, b - std::max(a, h.threshold));
    }
    throw std::invalid_argument("unknown penalty kind");
}

}  // namespace

double penalty(const AgeTrace& trace, const PenaltySpec& h) {
    double total = 0.0;
    double t = 0.0;
    double value = 0.0;
    for (const AgeTrace::Reset& r : trace.resets) {
        total += segment_penalty(value, value + (r.t - t), h);
        t = r.t;
        value = r.age_after;
    }
    total += segment_penalty(value, value + (trace.horizon - t), h);
    return total / trace.horizon;
}

AgeTrace lower_bound_trace(const SimOutput& lb_output, int node) {
    if (lb_output.policy_kind != PolicyKind::kAgeLowerBound)
        throw std::invalid_argument("lower-bound trace requires age-lb policy output");
    return age_trace(lb_output.deliveries.at(node), node, lb_output.horizon);
}

GapReport gap_report(const AgeTrace& policy_trace, const AgeTrace& bound_trace,
                     const Network& net, const std::vector<int>& path_to_node) {
    if (policy_trace.node != bound_trace.node)
        throw std::invalid_argument("gap report traces describe different nodes");
    if (policy_trace.horizon != bound_trace.horizon)
        throw std::invalid_argument("gap report traces have different horizons");
    if (path_to_node.empty() || path_to_node.back() != policy_trace.node)
        throw std::invalid_argument("hop path does not end at the trace node");

    GapReport report;
    report.node = policy_trace.node;
    report.hop_path = path_to_node;
    report.empirical_gap = time_average(policy_trace) - time_average(bound_trace);
    for (std::size_t m = 0; m < path_to_node.size(); ++m) {
        const int node = path_to_node[m];
        if (net.in_links[node].size() != 1)
            throw std::invalid_argument("hop path node " + std::to_string(node) +
                                        " lacks a unique incoming link");
        const double mean = net.links[net.in_links[node][0]].dist.mean();
        report.link_means.push_back(mean);
        report.analytic_bound += (m == 0 ? 1.0 : 2.0) * mean;
    }
    return report;
}

SamplewiseReport samplewise_dominance(const SimOutput& candidate, const SimOutput& reference) {
    if (candidate.mode == CouplingMode::kIndependent ||
        candidate.mode != reference.mode)
        throw std::invalid_argument("samplewise comparison needs coupled runs");
    if (candidate.seed != reference.seed || candidate.salt != reference.salt)
        throw std::invalid_argument("samplewise comparison needs a shared seed");
    if (candidate.u_trace.size() != reference.u_trace.size())
        throw std::invalid_argument("samplewise comparison needs matching node sets");

    SamplewiseReport report;
    for (std::size_t node = 0; node < candidate.u_trace.size(); ++node) {
        const auto& a = candidate.u_trace[node];
        const auto& b = reference.u_trace[node];
        std::size_t i = 0, j = 0;
        double ua = 0.0, ub = 0.0;
        while (i < a.size() || j < b.size()) {
            double t;
            if (i < a.size() && j < b.size())
                t = std::min(a[i].t, b[j].t);
            else
                t = i < a.size() ? a[i].t : b[j].t;
            while (i < a.size() && a[i].t == t) ua = a[i++].u;
            while (j < b.size() && b[j].t == t) ub = b[j++].u;
            ++report.points_checked;
            if (ua < ub) {
                ++report.violations;
                if (ub - ua > report.worst_gap) {
                    report.worst_gap = ub - ua;
                    report.worst_node = static_cast<int>(node);
                    report.worst_time = t;
                }
            }
        }
    }
    return report;
}

DistributionalReport distributional_dominance(const std::vector<AgeTrace>& candidate_runs,
                                              const std::vector<AgeTrace>& reference_runs,
                                              const std::vector<double>& probe_times,
                                              const std::vector<double>& thresholds,
                                              double confidence) {
    if (candidate_runs.empty() || reference_runs.empty())
        throw std::invalid_argument("distributional comparison needs replications");
    const double alpha = 1.0 - confidence;
    const double band_c = std::sqrt(std::log(2.0 / alpha) / (2.0 * candidate_runs.size()));
    const double band_r = std::sqrt(std::log(2.0 / alpha) / (2.0 * reference_runs.size()));

    DistributionalReport report;
    report.band = band_c + band_r;
    for (double t : probe_times) {
        std::vector<double> ages_c, ages_r;
        ages_c.reserve(candidate_runs.size());
        ages_r.reserve(reference_runs.size());
        for (const AgeTrace& trace : candidate_runs) ages_c.push_back(trace.age_at(t));
        for (const AgeTrace& trace : reference_runs) ages_r.push_back(trace.age_at(t));

        bool prev_flagged = false;
        for (double x : thresholds) {
            const auto exceed = [x](const std::vector<double>& v) {
                return static_cast<double>(std::count_if(
                           v.begin(), v.end(), [x](double age) { return age > x; })) /
                       static_cast<double>(v.size());
            };
            const double excess = exceed(ages_c) - exceed(ages_r) - report.band;
            const bool flagged = excess > 0.0;
            if (flagged) {
                ++report.flagged_cells;
                report.worst_excess = std::max(report.worst_excess, excess);
                if (prev_flagged) ++report.violations;  // two adjacent thresholds
            }
            prev_flagged = flagged;
        }
    }
    report.holds = report.violations == 0;
    return report;
}

MeanSe mean_se(const std::vector<double>& values) {
    MeanSe out;
    out.n = values.size();
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.se = std::sqrt(ss / (static_cast<double>(values.size() - 1) *
                                 static_cast<double>(values.size())));
    }
    return out;
}

}  // namespace aoisim

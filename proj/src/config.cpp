#include "aoisim/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace aoisim {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw std::invalid_argument(where + ": " + what);
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        bad(where, "missing numeric field '" + key + "'");
    return j[key].get<double>();
}

int buffer_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kInfiniteBuffer;
        bad(where, "buffer must be a non-negative integer or \"inf\"");
    }
    if (!j.is_number_integer() || j.get<int>() < 0)
        bad(where, "buffer must be a non-negative integer or \"inf\"");
    return j.get<int>();
}

json buffer_to_json(int buffer) {
    if (buffer == kInfiniteBuffer) return "inf";
    return buffer;
}

}  // namespace

DistSpec dist_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        bad(where, "distribution needs a string 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    DistSpec d;
    if (kind == "exponential") {
        d = DistSpec::exponential(j.contains("mean") ? 1.0 / require_number(j, "mean", where)
                                                     : require_number(j, "rate", where));
    } else if (kind == "gamma") {
        const double shape = require_number(j, "shape", where);
        d = j.contains("mean") ? DistSpec::gamma_with_mean(shape, require_number(j, "mean", where))
                               : DistSpec::gamma(shape, require_number(j, "scale", where));
    } else if (kind == "shifted_exponential") {
        d = DistSpec::shifted_exponential(require_number(j, "shift", where),
                                          require_number(j, "rate", where));
    } else if (kind == "erlang") {
        if (!j.contains("stages") || !j["stages"].is_number_integer())
            bad(where, "erlang needs integer 'stages'");
        const int stages = j["stages"].get<int>();
        const double rate = j.contains("mean")
                                ? static_cast<double>(stages) / require_number(j, "mean", where)
                                : require_number(j, "rate", where);
        d = DistSpec::erlang(stages, rate);
    } else if (kind == "deterministic") {
        d = DistSpec::deterministic(require_number(j, "value", where));
    } else if (kind == "geometric") {
        d = DistSpec::geometric(require_number(j, "p", where), require_number(j, "step", where));
    } else {
        bad(where, "unknown distribution kind '" + kind +
                       "' (valid: exponential, gamma, shifted_exponential, erlang, "
                       "deterministic, geometric)");
    }
    try {
        d.validate();
    } catch (const std::exception& e) {
        bad(where, e.what());
    }
    return d;
}

json dist_to_json(const DistSpec& dist) {
    json j;
    switch (dist.kind) {
        case DistKind::kExponential:
            j = {{"kind", "exponential"}, {"rate", dist.rate}};
            break;
        case DistKind::kGamma:
            j = {{"kind", "gamma"}, {"shape", dist.shape}, {"scale", dist.scale}};
            break;
        case DistKind::kShiftedExponential:
            j = {{"kind", "shifted_exponential"}, {"shift", dist.shift}, {"rate", dist.rate}};
            break;
        case DistKind::kErlang:
            j = {{"kind", "erlang"}, {"stages", dist.stages}, {"rate", dist.rate}};
            break;
        case DistKind::kDeterministic:
            j = {{"kind", "deterministic"}, {"value", dist.value}};
            break;
        case DistKind::kGeometric:
            j = {{"kind", "geometric"}, {"p", dist.p}, {"step", dist.step}};
            break;
    }
    return j;
}

std::string MetricSel::label() const {
    switch (kind) {
        case Kind::kTimeAvg: return "time_avg_age";
        case Kind::kAvgPeak: return "avg_peak_age";
        case Kind::kPenaltyFloor: return "penalty_floor";
        case Kind::kPenaltyExp: return "penalty_exp";
        case Kind::kPenaltyIndicator: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "penalty_indicator(d=%.10g)", threshold);
            return buf;
        }
    }
    return "?";
}

MetricSel parse_metric(const std::string& name) {
    MetricSel sel;
    if (name == "time_avg_age") {
        sel.kind = MetricSel::Kind::kTimeAvg;
    } else if (name == "avg_peak_age") {
        sel.kind = MetricSel::Kind::kAvgPeak;
    } else if (name == "penalty_floor") {
        sel.kind = MetricSel::Kind::kPenaltyFloor;
    } else if (name == "penalty_exp") {
        sel.kind = MetricSel::Kind::kPenaltyExp;
    } else if (name.rfind("penalty_indicator:", 0) == 0) {
        sel.kind = MetricSel::Kind::kPenaltyIndicator;
        try {
            sel.threshold = std::stod(name.substr(18));
        } catch (const std::exception&) {
            throw std::invalid_argument("metric '" + name +
                                        "': expected penalty_indicator:<threshold>");
        }
    } else {
        throw std::invalid_argument(
            "unknown metric '" + name +
            "' (valid: time_avg_age, avg_peak_age, penalty_floor, penalty_exp, "
            "penalty_indicator:<d>)");
    }
    return sel;
}

namespace {

std::string metric_config_name(const MetricSel& sel) {
    if (sel.kind == MetricSel::Kind::kPenaltyIndicator) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "penalty_indicator:%.10g", sel.threshold);
        return buf;
    }
    return sel.label();
}

TrafficSpec traffic_from_json(const json& j) {
    TrafficSpec spec;
    if (!j.is_object()) bad("traffic", "must be an object");
    if (!j.contains("generation")) bad("traffic", "missing 'generation'");
    const json& gen = j["generation"];
    const std::string gen_kind = gen.value("kind", "");
    if (gen_kind == "renewal") {
        spec.gen = TrafficSpec::Gen::kRenewal;
        if (!gen.contains("dist")) bad("traffic.generation", "renewal needs 'dist'");
        spec.inter_gen = dist_from_json(gen["dist"], "traffic.generation.dist");
    } else if (gen_kind == "trace") {
        spec.gen = TrafficSpec::Gen::kTrace;
        if (!gen.contains("path") || !gen["path"].is_string())
            bad("traffic.generation", "trace needs string 'path'");
        spec.trace_path = gen["path"].get<std::string>();
    } else {
        bad("traffic.generation", "kind must be 'renewal' or 'trace'");
    }

    const json delay = j.value("delay", json{{"kind", "zero"}});
    const std::string delay_kind = delay.value("kind", "");
    if (delay_kind == "zero") {
        spec.delay = TrafficSpec::Delay::kZero;
    } else if (delay_kind == "two_point") {
        spec.delay = TrafficSpec::Delay::kTwoPoint;
        spec.two_point_d1 = require_number(delay, "d1", "traffic.delay");
        spec.two_point_d2 = require_number(delay, "d2", "traffic.delay");
        spec.two_point_p = require_number(delay, "p", "traffic.delay");
        if (spec.two_point_d1 < 0 || spec.two_point_d2 < 0)
            bad("traffic.delay", "delays must be non-negative");
    } else if (delay_kind == "dist") {
        spec.delay = TrafficSpec::Delay::kDist;
        if (!delay.contains("dist")) bad("traffic.delay", "dist delay needs 'dist'");
        spec.delay_dist = dist_from_json(delay["dist"], "traffic.delay.dist");
    } else {
        bad("traffic.delay", "kind must be 'zero', 'two_point', or 'dist'");
    }
    return spec;
}

json traffic_to_json(const TrafficSpec& spec) {
    json j;
    if (spec.gen == TrafficSpec::Gen::kRenewal)
        j["generation"] = {{"kind", "renewal"}, {"dist", dist_to_json(spec.inter_gen)}};
    else
        j["generation"] = {{"kind", "trace"}, {"path", spec.trace_path}};
    switch (spec.delay) {
        case TrafficSpec::Delay::kZero:
            j["delay"] = {{"kind", "zero"}};
            break;
        case TrafficSpec::Delay::kTwoPoint:
            j["delay"] = {{"kind", "two_point"},
                          {"d1", spec.two_point_d1},
                          {"d2", spec.two_point_d2},
                          {"p", spec.two_point_p}};
            break;
        case TrafficSpec::Delay::kDist:
            j["delay"] = {{"kind", "dist"}, {"dist", dist_to_json(spec.delay_dist)}};
            break;
    }
    return j;
}

PolicySpec policy_from_json(const json& j, const std::string& where) {
    PolicySpec spec;
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        bad(where, "policy needs a string 'kind'");
    try {
        spec.kind = parse_policy_kind(j["kind"].get<std::string>());
    } catch (const std::exception& e) {
        bad(where, e.what());
    }
    if (j.contains("buffer")) spec.buffer_override = buffer_from_json(j["buffer"], where);
    if (j.contains("label")) spec.label = j["label"].get<std::string>();
    if (j.contains("overrides")) {
        for (const json& o : j["overrides"]) {
            const int from = static_cast<int>(require_number(o, "from", where + ".overrides"));
            const int to = static_cast<int>(require_number(o, "to", where + ".overrides"));
            if (!o.contains("kind")) bad(where + ".overrides", "missing 'kind'");
            spec.per_link[{from, to}] = parse_policy_kind(o["kind"].get<std::string>());
        }
    }
    return spec;
}

json policy_to_json(const PolicySpec& spec) {
    json j{{"kind", policy_kind_name(spec.kind)}};
    if (spec.buffer_override) j["buffer"] = buffer_to_json(*spec.buffer_override);
    if (!spec.label.empty()) j["label"] = spec.label;
    if (!spec.per_link.empty()) {
        json overrides = json::array();
        for (const auto& [link, kind] : spec.per_link)
            overrides.push_back({{"from", link.first},
                                 {"to", link.second},
                                 {"kind", policy_kind_name(kind)}});
        j["overrides"] = overrides;
    }
    return j;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig config;
    if (!j.is_object()) bad("config", "top level must be an object");

    if (!j.contains("network") || !j["network"].is_object())
        bad("network", "missing object");
    const json& net = j["network"];
    if (!net.contains("nodes") || !net["nodes"].is_number_integer())
        bad("network.nodes", "missing integer");
    config.network.node_count = net["nodes"].get<int>();
    if (!net.contains("links") || !net["links"].is_array())
        bad("network.links", "missing array");
    int link_idx = 0;
    for (const json& lj : net["links"]) {
        const std::string where = "network.links[" + std::to_string(link_idx++) + "]";
        LinkSpec link;
        link.from = static_cast<int>(require_number(lj, "from", where));
        link.to = static_cast<int>(require_number(lj, "to", where));
        link.buffer = lj.contains("buffer") ? buffer_from_json(lj["buffer"], where)
                                            : kInfiniteBuffer;
        if (!lj.contains("dist")) bad(where, "missing 'dist'");
        link.dist = dist_from_json(lj["dist"], where + ".dist");
        config.network.links.push_back(link);
    }
    config.network.gateways = net.value("gateways", std::vector<int>{0});

    if (!j.contains("traffic")) bad("traffic", "missing object");
    config.traffic = traffic_from_json(j["traffic"]);

    if (!j.contains("policies") || !j["policies"].is_array() || j["policies"].empty())
        bad("policies", "need a non-empty array");
    int policy_idx = 0;
    for (const json& pj : j["policies"])
        config.policies.push_back(
            policy_from_json(pj, "policies[" + std::to_string(policy_idx++) + "]"));

    config.coupling = parse_coupling_mode(j.value("coupling", "independent"));
    config.horizon = require_number(j, "horizon", "config");
    config.traffic.horizon = config.horizon;
    config.replications = static_cast<int>(j.value("replications", 1));
    config.seed = j.value("seed", std::uint64_t{1});

    for (const json& m : j.value("metrics", json::array({"time_avg_age"})))
        config.metrics.push_back(parse_metric(m.get<std::string>()));
    config.nodes = j.value("nodes", std::vector<int>{});
    if (config.nodes.empty()) bad("nodes", "need at least one node to report");

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        const std::string var = s.value("var", "");
        if (var == "lambda")
            config.sweep.var = SweepSpec::Var::kLambda;
        else if (var == "beta")
            config.sweep.var = SweepSpec::Var::kBeta;
        else
            bad("sweep.var", "must be 'lambda' or 'beta'");
        config.sweep.grid = s.value("grid", std::vector<double>{});
        if (config.sweep.grid.empty()) bad("sweep.grid", "must be non-empty");
    }
    config.out_dir = j.value("out", std::string{"."});
    return config;
}

json to_json(const ExperimentConfig& config) {
    json j;
    json links = json::array();
    for (const LinkSpec& link : config.network.links)
        links.push_back({{"from", link.from},
                         {"to", link.to},
                         {"buffer", buffer_to_json(link.buffer)},
                         {"dist", dist_to_json(link.dist)}});
    j["network"] = {{"nodes", config.network.node_count},
                    {"links", links},
                    {"gateways", config.network.gateways}};
    j["traffic"] = traffic_to_json(config.traffic);
    json policies = json::array();
    for (const PolicySpec& p : config.policies) policies.push_back(policy_to_json(p));
    j["policies"] = policies;
    j["coupling"] = coupling_mode_name(config.coupling);
    j["horizon"] = config.horizon;
    j["replications"] = config.replications;
    j["seed"] = config.seed;
    json metrics = json::array();
    for (const MetricSel& m : config.metrics) metrics.push_back(metric_config_name(m));
    j["metrics"] = metrics;
    j["nodes"] = config.nodes;
    if (config.sweep.var != SweepSpec::Var::kNone)
        j["sweep"] = {{"var", config.sweep.var == SweepSpec::Var::kLambda ? "lambda" : "beta"},
                      {"grid", config.sweep.grid}};
    j["out"] = config.out_dir;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    ExperimentConfig config = parse_config(j);
    validate_config(config);
    return config;
}

void validate_config(const ExperimentConfig& config) {
    const Network net = build_network(config.network);
    for (int n : config.nodes)
        if (n < 0 || n >= net.node_count)
            throw std::invalid_argument("reported node " + std::to_string(n) +
                                        " does not exist");
    if (config.replications < 1)
        throw std::invalid_argument("replications must be >= 1");
    if (!(config.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (config.coupling == CouplingMode::kSharedDraws)
        for (const PolicySpec& p : config.policies)
            if (p.preemptive())
                throw std::invalid_argument(
                    "shared_draws coupling requires non-preemptive policies");
    if (config.coupling == CouplingMode::kUniformization)
        for (const LinkSpec& link : config.network.links)
            if (link.dist.kind != DistKind::kExponential)
                throw std::invalid_argument(
                    "uniformization requires exponential links throughout");
}

namespace {

DistSpec with_mean(const DistSpec& dist, double mean, const std::string& where) {
    if (!(mean > 0.0)) bad(where, "swept mean must be positive");
    DistSpec d = dist;
    switch (dist.kind) {
        case DistKind::kExponential:
            d.rate = 1.0 / mean;
            break;
        case DistKind::kGamma:
            d.scale = mean / d.shape;
            break;
        case DistKind::kErlang:
            d.rate = static_cast<double>(d.stages) / mean;
            break;
        case DistKind::kDeterministic:
            d.value = mean;
            break;
        case DistKind::kShiftedExponential:
            if (mean <= d.shift) bad(where, "swept mean must exceed the shift");
            d.rate = 1.0 / (mean - d.shift);
            break;
        case DistKind::kGeometric:
            d.step = mean * d.p;
            break;
    }
    return d;
}

}  // namespace

ExperimentConfig at_sweep_point(const ExperimentConfig& config, double value) {
    ExperimentConfig point = config;
    switch (config.sweep.var) {
        case SweepSpec::Var::kNone:
            break;
        case SweepSpec::Var::kLambda:
            if (point.traffic.gen != TrafficSpec::Gen::kRenewal)
                throw std::invalid_argument("lambda sweep requires renewal traffic");
            point.traffic.inter_gen =
                with_mean(point.traffic.inter_gen, 1.0 / value, "sweep lambda");
            break;
        case SweepSpec::Var::kBeta: {
            bool any = false;
            for (LinkSpec& link : point.network.links) {
                if (link.dist.kind != DistKind::kGamma) continue;
                const double mean = link.dist.mean();
                link.dist.shape = value;
                link.dist.scale = mean / value;
                any = true;
            }
            if (!any) throw std::invalid_argument("beta sweep requires gamma links");
            break;
        }
    }
    return point;
}

namespace {

PolicySpec make_policy(PolicyKind kind) {
    PolicySpec p;
    p.kind = kind;
    return p;
}

PolicySpec make_policy(PolicyKind kind, int buffer) {
    PolicySpec p;
    p.kind = kind;
    p.buffer_override = buffer;
    return p;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> grid;
    grid.reserve(points);
    for (int i = 0; i < points; ++i)
        grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    return grid;
}

// 4-node diamond used by the peak-age and heterogeneous-link experiments:
// two routes 0->1->2 and 0->2 merge at node 2, both feeding node 3.
NetworkSpec diamond_network() {
    NetworkSpec net;
    net.node_count = 4;
    net.links = {
        {0, 1, kInfiniteBuffer, DistSpec::exponential(1.0)},
        {0, 2, kInfiniteBuffer, DistSpec::exponential(2.0)},
        {1, 2, kInfiniteBuffer, DistSpec::exponential(1.0)},
        {1, 3, kInfiniteBuffer, DistSpec::exponential(1.0)},
        {2, 3, kInfiniteBuffer, DistSpec::exponential(1.0)},
    };
    return net;
}

// 12-node tree: 5-hop chain 0->1->2->3->4->5 plus one leaf per chain node.
NetworkSpec deep_tree_network(const DistSpec& link_dist) {
    NetworkSpec net;
    net.node_count = 12;
    const int chain[] = {0, 1, 2, 3, 4, 5};
    for (int i = 0; i + 1 < 6; ++i) net.links.push_back({chain[i], chain[i + 1], 1, link_dist});
    for (int i = 0; i < 6; ++i) net.links.push_back({chain[i], 6 + i, 1, link_dist});
    return net;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig5", "fig6", "fig7"}; }

ExperimentConfig make_preset(const std::string& name) {
    ExperimentConfig config;
    config.traffic.gen = TrafficSpec::Gen::kRenewal;
    config.traffic.inter_gen = DistSpec::erlang(2, 2.0);  // Erlang-2, mean 1/lambda

    if (name == "fig5") {
        config.network = diamond_network();
        config.traffic.delay = TrafficSpec::Delay::kTwoPoint;
        config.traffic.two_point_d1 = 1.0;
        config.traffic.two_point_d2 = 100.0;
        config.traffic.two_point_p = 0.5;
        config.policies = {
            make_policy(PolicyKind::kPrmpLgfs),
            make_policy(PolicyKind::kNonPrmpLgfs, 1),
            make_policy(PolicyKind::kNonPrmpLgfs, kInfiniteBuffer),
            make_policy(PolicyKind::kNonPrmpLcfs, 1),
            make_policy(PolicyKind::kNonPrmpLcfs, kInfiniteBuffer),
            make_policy(PolicyKind::kFcfs, 1),
            make_policy(PolicyKind::kFcfs, kInfiniteBuffer),
        };
        config.horizon = 2000.0;
        config.replications = 20;
        config.metrics = {MetricSel{MetricSel::Kind::kAvgPeak}};
        config.nodes = {2};
        config.sweep = {SweepSpec::Var::kLambda, log_grid(0.05, 5.0, 20)};
    } else if (name == "fig6") {
        config.network = deep_tree_network(DistSpec::gamma_with_mean(3.0, 0.2));
        config.traffic.inter_gen = DistSpec::erlang(2, 60.0);  // lambda = 30
        config.traffic.delay = TrafficSpec::Delay::kZero;
        config.policies = {
            make_policy(PolicyKind::kPrmpLgfs),
            make_policy(PolicyKind::kNonPrmpLgfs, 1),
            make_policy(PolicyKind::kNonPrmpLgfs, 10),
            make_policy(PolicyKind::kNonPrmpLgfs, 100),
            make_policy(PolicyKind::kNonPrmpLcfs, 1),
            make_policy(PolicyKind::kFcfs, 1),
            make_policy(PolicyKind::kAgeLowerBound, 1),
        };
        config.horizon = 20000.0;
        config.replications = 20;
        config.metrics = {MetricSel{MetricSel::Kind::kTimeAvg}};
        config.nodes = {5};
        config.sweep = {SweepSpec::Var::kBeta, {0.5, 1.0, 2.0, 3.0, 4.0}};
    } else if (name == "fig7") {
        config.network = diamond_network();
        const DistSpec gamma_mean1 = DistSpec::gamma_with_mean(2.0, 1.0);
        const DistSpec shifted = DistSpec::shifted_exponential(0.5, 2.0);
        config.network.links[0].dist = gamma_mean1;  // (0,1)
        config.network.links[1].dist = shifted;      // (0,2)
        config.network.links[2].dist = shifted;      // (1,2)
        config.network.links[3].dist = gamma_mean1;  // (1,3)
        config.network.links[4].dist = shifted;      // (2,3)
        config.traffic.delay = TrafficSpec::Delay::kTwoPoint;
        config.traffic.two_point_d1 = 1.0;
        config.traffic.two_point_d2 = 100.0;
        config.traffic.two_point_p = 0.5;
        config.policies = {
            make_policy(PolicyKind::kNonPrmpLgfs, 1),
            make_policy(PolicyKind::kNonPrmpLgfs, kInfiniteBuffer),
            make_policy(PolicyKind::kNonPrmpLcfs, 1),
            make_policy(PolicyKind::kNonPrmpLcfs, kInfiniteBuffer),
            make_policy(PolicyKind::kFcfs, 1),
            make_policy(PolicyKind::kFcfs, kInfiniteBuffer),
        };
        config.coupling = CouplingMode::kSharedDraws;
        config.horizon = 3000.0;
        config.replications = 20;
        config.metrics = {MetricSel{MetricSel::Kind::kTimeAvg}};
        config.nodes = {3};
        config.sweep = {SweepSpec::Var::kLambda, log_grid(0.05, 5.0, 20)};
    } else {
        throw std::invalid_argument("unknown preset '" + name +
                                    "' (valid: fig5, fig6, fig7)");
    }
    config.traffic.horizon = config.horizon;
    validate_config(config);
    return config;
}

}  // namespace aoisim

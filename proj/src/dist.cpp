#include "aoisim/dist.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aoisim {

namespace {

// Regularized lower incomplete gamma P(a,x): series for x < a+1,
// Lentz continued fraction for the upper tail otherwise.
double regularized_gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 10000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    return 1.0 - q;
}

double standard_normal(DrawStream& stream) {
    // Marsaglia polar method.
    for (;;) {
        const double u = 2.0 * stream.uniform() - 1.0;
        const double v = 2.0 * stream.uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double sample_exponential(double rate, DrawStream& stream) {
    return -std::log(stream.uniform_pos()) / rate;
}

// Marsaglia-Tsang; shape < 1 handled by the boosting identity
// Gamma(a) = Gamma(a+1) * U^(1/a).
double sample_gamma(double shape, double scale, DrawStream& stream) {
    if (shape < 1.0) {
        const double boost = std::pow(stream.uniform_pos(), 1.0 / shape);
        return sample_gamma(shape + 1.0, scale, stream) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = standard_normal(stream);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = stream.uniform_pos();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

[[noreturn]] void invalid(const DistSpec& d, const char* what) {
    throw std::invalid_argument("invalid distribution " + d.to_string() + ": " + what);
}

}  // namespace

DistSpec DistSpec::exponential(double rate) {
    DistSpec d;
    d.kind = DistKind::kExponential;
    d.rate = rate;
    return d;
}

DistSpec DistSpec::gamma(double shape, double scale) {
    DistSpec d;
    d.kind = DistKind::kGamma;
    d.shape = shape;
    d.scale = scale;
    return d;
}

DistSpec DistSpec::gamma_with_mean(double shape, double mean) {
    return gamma(shape, mean / shape);
}

DistSpec DistSpec::shifted_exponential(double shift, double rate) {
    DistSpec d;
    d.kind = DistKind::kShiftedExponential;
    d.shift = shift;
    d.rate = rate;
    return d;
}

DistSpec DistSpec::erlang(int stages, double rate) {
    DistSpec d;
    d.kind = DistKind::kErlang;
    d.stages = stages;
    d.rate = rate;
    return d;
}

DistSpec DistSpec::deterministic(double value) {
    DistSpec d;
    d.kind = DistKind::kDeterministic;
    d.value = value;
    return d;
}

DistSpec DistSpec::geometric(double p, double step) {
    DistSpec d;
    d.kind = DistKind::kGeometric;
    d.p = p;
    d.step = step;
    return d;
}

void DistSpec::validate() const {
    switch (kind) {
        case DistKind::kExponential:
            if (!(rate > 0.0)) invalid(*this, "rate must be positive");
            break;
        case DistKind::kGamma:
            if (!(shape > 0.0)) invalid(*this, "shape must be positive");
            if (!(scale > 0.0)) invalid(*this, "scale must be positive");
            break;
        case DistKind::kShiftedExponential:
            if (!(shift >= 0.0)) invalid(*this, "shift must be non-negative");
            if (!(rate > 0.0)) invalid(*this, "rate must be positive");
            break;
        case DistKind::kErlang:
            if (stages < 1) invalid(*this, "stages must be >= 1");
            if (!(rate > 0.0)) invalid(*this, "rate must be positive");
            break;
        case DistKind::kDeterministic:
            if (!(value > 0.0)) invalid(*this, "value must be positive");
            break;
        case DistKind::kGeometric:
            if (!(p > 0.0 && p <= 1.0)) invalid(*this, "p must be in (0,1]");
            if (!(step > 0.0)) invalid(*this, "step must be positive");
            break;
    }
}

double DistSpec::mean() const {
    switch (kind) {
        case DistKind::kExponential: return 1.0 / rate;
        case DistKind::kGamma: return shape * scale;
        case DistKind::kShiftedExponential: return shift + 1.0 / rate;
        case DistKind::kErlang: return static_cast<double>(stages) / rate;
        case DistKind::kDeterministic: return value;
        case DistKind::kGeometric: return step / p;
    }
    return 0.0;
}

double DistSpec::ccdf(double x) const {
    if (x < 0.0) return 1.0;
    switch (kind) {
        case DistKind::kExponential:
            return std::exp(-rate * x);
        case DistKind::kGamma:
            return 1.0 - regularized_gamma_p(shape, x / scale);
        case DistKind::kShiftedExponential:
            return x < shift ? 1.0 : std::exp(-rate * (x - shift));
        case DistKind::kErlang: {
            // P[X > x] = exp(-rx) * sum_{n<stages} (rx)^n / n!
            const double rx = rate * x;
            double term = 1.0;
            double sum = 1.0;
            for (int n = 1; n < stages; ++n) {
                term *= rx / n;
                sum += term;
            }
            return std::exp(-rx) * sum;
        }
        case DistKind::kDeterministic:
            return x < value ? 1.0 : 0.0;
        case DistKind::kGeometric:
            // lattice count below x; the offset absorbs float noise in x/step
            // so queries at intended lattice points land on the right step
            return std::pow(1.0 - p, std::floor(x / step + 1e-9));
    }
    return 0.0;
}

std::string DistSpec::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case DistKind::kExponential: out << "exponential(rate=" << rate << ")"; break;
        case DistKind::kGamma: out << "gamma(shape=" << shape << ",scale=" << scale << ")"; break;
        case DistKind::kShiftedExponential:
            out << "shifted_exponential(shift=" << shift << ",rate=" << rate << ")";
            break;
        case DistKind::kErlang: out << "erlang(stages=" << stages << ",rate=" << rate << ")"; break;
        case DistKind::kDeterministic: out << "deterministic(value=" << value << ")"; break;
        case DistKind::kGeometric: out << "geometric(p=" << p << ",step=" << step << ")"; break;
    }
    return out.str();
}

double sample(const DistSpec& dist, DrawStream& stream) {
    switch (dist.kind) {
        case DistKind::kExponential:
            return sample_exponential(dist.rate, stream);
        case DistKind::kGamma:
            return sample_gamma(dist.shape, dist.scale, stream);
        case DistKind::kShiftedExponential:
            return dist.shift + sample_exponential(dist.rate, stream);
        case DistKind::kErlang: {
            double total = 0.0;
            for (int i = 0; i < dist.stages; ++i) total += sample_exponential(dist.rate, stream);
            return total;
        }
        case DistKind::kDeterministic:
            return dist.value;
        case DistKind::kGeometric: {
            // inversion: G = ceil(log(U) / log(1-p)), at least 1
            if (dist.p >= 1.0) return dist.step;
            const double u = stream.uniform_pos();
            const double g = std::ceil(std::log(u) / std::log(1.0 - dist.p));
            return dist.step * std::max(1.0, g);
        }
    }
    return 0.0;
}

double sample(const DistSpec& dist, const StreamKey& key) {
    dist.validate();
    DrawStream stream(key);
    return sample(dist, stream);
}

NbuReport check_nbu(const DistSpec& dist,
                    const std::vector<std::pair<double, double>>& grid,
                    double tolerance) {
    dist.validate();
    NbuReport report;
    for (const auto& [tau, t] : grid) {
        const double lhs = dist.ccdf(tau + t);
        const double rhs = dist.ccdf(tau) * dist.ccdf(t);
        const double violation = lhs - rhs;
        if (violation > report.worst_violation) {
            report.worst_violation = violation;
            report.worst_tau = tau;
            report.worst_t = t;
        }
    }
    report.holds = report.worst_violation <= tolerance;
    return report;
}

std::vector<std::pair<double, double>> default_nbu_grid(const DistSpec& dist) {
    const double m = dist.mean();
    std::vector<double> axis;
    for (int i = 0; i <= 50; ++i) axis.push_back(0.1 * i * m);
    std::vector<std::pair<double, double>> grid;
    grid.reserve(axis.size() * axis.size());
    for (double tau : axis)
        for (double t : axis) grid.emplace_back(tau, t);
    return grid;
}

}  // namespace aoisim

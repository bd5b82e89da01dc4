#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aoisim/rng.hpp"

namespace aoisim {

enum class DistKind {
    kExponential,         // rate
    kGamma,               // shape, scale
    kShiftedExponential,  // shift + Exp(rate)
    kErlang,              // stages, rate
    kDeterministic,       // value
    kGeometric,           // step * Geometric(p), support {step, 2*step, ...}
};

// Transmission-time / inter-generation distribution. Parameters are valid
// only for the fields their kind uses; validate() enforces positivity.
struct DistSpec {
    DistKind kind = DistKind::kDeterministic;
    double rate = 0.0;
    double shape = 0.0;
    double scale = 0.0;
    double shift = 0.0;
    double value = 0.0;
    int stages = 0;
    double p = 0.0;
    double step = 0.0;

    static DistSpec exponential(double rate);
    static DistSpec gamma(double shape, double scale);
    static DistSpec gamma_with_mean(double shape, double mean);
    static DistSpec shifted_exponential(double shift, double rate);
    static DistSpec erlang(int stages, double rate);
    static DistSpec deterministic(double value);
    static DistSpec geometric(double p, double step);

    void validate() const;  // throws std::invalid_argument
    double mean() const;
    // Complementary CDF P[X > x], exact closed form per kind.
    double ccdf(double x) const;
    std::string to_string() const;

    bool operator==(const DistSpec&) const = default;
};

// One draw addressed by `key`; consumes as many uniforms as the kind needs.
double sample(const DistSpec& dist, const StreamKey& key);
double sample(const DistSpec& dist, DrawStream& stream);

// Checks F(tau+t) <= F(tau)*F(t) (CCDFs) over a grid of (tau, t) pairs.
// A distribution passing everywhere has remaining life stochastically
// shorter than a fresh draw at every elapsed age on the grid.
struct NbuReport {
    bool holds = true;
    double worst_violation = 0.0;  // max of ccdf(tau+t) - ccdf(tau)*ccdf(t)
    double worst_tau = 0.0;
    double worst_t = 0.0;
};

NbuReport check_nbu(const DistSpec& dist,
                    const std::vector<std::pair<double, double>>& grid,
                    double tolerance = 1e-12);

// Cross product of {0, 0.1*mean, ..., 5*mean} with itself.
std::vector<std::pair<double, double>> default_nbu_grid(const DistSpec& dist);

}  // namespace aoisim

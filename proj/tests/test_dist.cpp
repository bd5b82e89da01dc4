#include <doctest.h>

#include <cmath>
#include <vector>

#include "aoisim/dist.hpp"
#include "oracles.hpp"

using namespace aoisim;

namespace {

std::vector<DistSpec> catalog() {
    return {
        DistSpec::exponential(2.0),
        DistSpec::gamma_with_mean(3.0, 0.2),
        DistSpec::gamma_with_mean(0.5, 0.2),
        DistSpec::shifted_exponential(0.5, 2.0),
        DistSpec::erlang(2, 6.0),
        DistSpec::deterministic(0.5),
        DistSpec::geometric(0.25, 0.1),
    };
}

StreamKey key_at(std::uint64_t index) {
    return StreamKey{42, StreamPurpose::kScratch, 7, index};
}

}  // namespace

TEST_CASE("analytic means") {
    CHECK(DistSpec::exponential(2.0).mean() == doctest::Approx(0.5));
    CHECK(DistSpec::shifted_exponential(0.5, 2.0).mean() == doctest::Approx(1.0));
    // Erlang-2 with rate 2*lambda has mean 1/lambda
    CHECK(DistSpec::erlang(2, 6.0).mean() == doctest::Approx(1.0 / 3.0));
    CHECK(DistSpec::gamma_with_mean(3.0, 0.2).mean() == doctest::Approx(0.2));
    CHECK(DistSpec::deterministic(0.5).mean() == doctest::Approx(0.5));
    CHECK(DistSpec::geometric(0.25, 0.1).mean() == doctest::Approx(0.4));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(sample(DistSpec::exponential(0.0), key_at(0)), std::invalid_argument);
    CHECK_THROWS_AS(sample(DistSpec::exponential(-1.0), key_at(0)), std::invalid_argument);
    CHECK_THROWS_AS(sample(DistSpec::gamma(-0.5, 1.0), key_at(0)), std::invalid_argument);
    CHECK_THROWS_AS(sample(DistSpec::erlang(0, 1.0), key_at(0)), std::invalid_argument);
    CHECK_THROWS_AS(sample(DistSpec::geometric(1.5, 0.1), key_at(0)), std::invalid_argument);
}

TEST_CASE("point mass sampling") {
    for (int i = 0; i < 10; ++i)
        CHECK(sample(DistSpec::deterministic(0.5), key_at(i)) == 0.5);
}

TEST_CASE("keyed draws are reproducible and scope-separated") {
    const DistSpec exp1 = DistSpec::exponential(1.0);
    for (int i = 0; i < 100; ++i)
        CHECK(sample(exp1, key_at(i)) == sample(exp1, key_at(i)));

    // distinct indices, entities, purposes and seeds give distinct draws
    CHECK(sample(exp1, key_at(3)) != sample(exp1, key_at(4)));
    StreamKey other_entity = key_at(3);
    other_entity.entity = 8;
    CHECK(sample(exp1, key_at(3)) != sample(exp1, other_entity));
    StreamKey other_purpose = key_at(3);
    other_purpose.purpose = StreamPurpose::kService;
    CHECK(sample(exp1, key_at(3)) != sample(exp1, other_purpose));
    StreamKey other_seed = key_at(3);
    other_seed.master_seed = 43;
    CHECK(sample(exp1, key_at(3)) != sample(exp1, other_seed));
}

TEST_CASE("empirical means match analytic means within 4 standard errors") {
    const int n = 1000000;
    for (const DistSpec& dist : catalog()) {
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = sample(dist, key_at(i));
            CHECK(x >= 0.0);
            sum += x;
            sq += x * x;
        }
        const double mean = sum / n;
        const double var = std::max(sq / n - mean * mean, 0.0);
        const double se = std::sqrt(var / n);
        INFO(dist.to_string());
        CHECK(std::fabs(mean - dist.mean()) <= 4.0 * se + 1e-12);
    }
}

TEST_CASE("gamma normalized to mean 0.2 hits 0.2 +- 0.002 over 1e6 draws") {
    const DistSpec dist = DistSpec::gamma_with_mean(3.0, 0.2);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample(dist, key_at(i));
    CHECK(std::fabs(sum / n - 0.2) < 0.002);
}

TEST_CASE("ccdf closed forms") {
    CHECK(DistSpec::exponential(3.0).ccdf(0.0) == 1.0);
    CHECK(DistSpec::exponential(3.0).ccdf(1.0) == doctest::Approx(std::exp(-3.0)));
    CHECK(DistSpec::deterministic(0.5).ccdf(0.4) == 1.0);
    CHECK(DistSpec::deterministic(0.5).ccdf(0.6) == 0.0);

    // Erlang-2 rate 2*lambda: ccdf(x) = exp(-2 lambda x) (1 + 2 lambda x)
    const double lam = 3.0;
    const DistSpec erl = DistSpec::erlang(2, 2.0 * lam);
    for (double x : {0.0, 0.1, 0.5, 1.0}) {
        CHECK(erl.ccdf(x) ==
              doctest::Approx(std::exp(-2 * lam * x) * (1 + 2 * lam * x)).epsilon(1e-12));
        CHECK(erl.ccdf(x) ==
              doctest::Approx(oracle::erlang_ccdf_quadrature(2, 2.0 * lam, x)).epsilon(1e-6));
    }
}

TEST_CASE("gamma ccdf agrees with quadrature") {
    for (double shape : {0.5, 1.0, 3.0}) {
        const DistSpec dist = DistSpec::gamma_with_mean(shape, 0.2);
        for (double x : {0.01, 0.1, 0.2, 0.5, 1.0}) {
            INFO("shape " << shape << " x " << x);
            CHECK(dist.ccdf(x) ==
                  doctest::Approx(oracle::gamma_ccdf_quadrature(shape, dist.scale, x))
                      .epsilon(1e-6));
        }
    }
}

TEST_CASE("empirical ccdf within DKW band at 0.999 over 1e6 samples") {
    const int n = 1000000;
    const double band = std::sqrt(std::log(2.0 / 0.001) / (2.0 * n));
    for (const DistSpec& dist : catalog()) {
        std::vector<double> draws(n);
        for (int i = 0; i < n; ++i) draws[i] = sample(dist, key_at(i));
        const double m = dist.mean();
        for (int k = 1; k <= 10; ++k) {
            const double x = 0.4 * k * m;
            long count = 0;
            for (double d : draws)
                if (d > x) ++count;
            const double empirical = static_cast<double>(count) / n;
            INFO(dist.to_string() << " at x=" << x);
            CHECK(std::fabs(empirical - dist.ccdf(x)) <= band);
        }
    }
}

TEST_CASE("memoryless ccdf factorizes exactly on the grid") {
    const DistSpec dist = DistSpec::exponential(1.7);
    const auto grid = default_nbu_grid(dist);
    CHECK(grid.size() == 51 * 51);
    for (const auto& [tau, t] : grid)
        CHECK(std::fabs(dist.ccdf(tau + t) - dist.ccdf(tau) * dist.ccdf(t)) < 1e-12);
    const NbuReport report = check_nbu(dist, grid);
    CHECK(report.holds);
    CHECK(report.worst_violation < 1e-12);
}

TEST_CASE("used-beats-new inequality across the catalog") {
    for (const DistSpec& dist :
         {DistSpec::gamma_with_mean(3.0, 0.2), DistSpec::erlang(2, 6.0),
          DistSpec::deterministic(0.5), DistSpec::shifted_exponential(0.5, 2.0),
          DistSpec::geometric(0.25, 0.1)}) {
        INFO(dist.to_string());
        CHECK(check_nbu(dist, default_nbu_grid(dist)).holds);
    }
}

TEST_CASE("gamma with shape 0.5 violates the inequality") {
    const DistSpec dist = DistSpec::gamma_with_mean(0.5, 0.2);
    const NbuReport report = check_nbu(dist, default_nbu_grid(dist));
    CHECK_FALSE(report.holds);
    CHECK(report.worst_violation > 1e-6);

    // same conclusion from the quadrature ccdf, independent of DistSpec::ccdf
    double worst = 0.0;
    for (const auto& [tau, t] : default_nbu_grid(dist)) {
        const auto q = [&](double x) {
            return oracle::gamma_ccdf_quadrature(dist.shape, dist.scale, x);
        };
        worst = std::max(worst, q(tau + t) - q(tau) * q(t));
    }
    CHECK(worst > 1e-6);
}

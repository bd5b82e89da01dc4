#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "aoisim/traffic.hpp"

using namespace aoisim;

namespace {
const std::vector<int> kGateway0{0};
}

TEST_CASE("deterministic renewal clock") {
    TrafficSpec spec;
    spec.inter_gen = DistSpec::deterministic(1.0);
    spec.horizon = 3.0;
    const auto packets = generate(spec, kGateway0, 1);
    REQUIRE(packets.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(packets[i].id == i + 1);
        CHECK(packets[i].gen_time == doctest::Approx(i + 1.0));
        CHECK(packets[i].arrival_at(0) == packets[i].gen_time);
    }
}

TEST_CASE("two point delay hits both values with the configured probability") {
    TrafficSpec spec;
    spec.inter_gen = DistSpec::deterministic(0.01);
    spec.delay = TrafficSpec::Delay::kTwoPoint;
    spec.two_point_d1 = 1.0;
    spec.two_point_d2 = 100.0;
    spec.two_point_p = 0.5;
    spec.horizon = 1000.0;
    const auto packets = generate(spec, kGateway0, 7);
    REQUIRE(packets.size() == 100000);
    long small = 0;
    for (const Packet& pkt : packets) {
        const double delay = pkt.arrival_at(0) - pkt.gen_time;
        CHECK((std::fabs(delay - 1.0) < 1e-9 || std::fabs(delay - 100.0) < 1e-9));
        if (delay < 2.0) ++small;
    }
    const double n = static_cast<double>(packets.size());
    const double se = std::sqrt(0.25 / n);
    CHECK(std::fabs(small / n - 0.5) <= 4.0 * se);
}

TEST_CASE("out of order gateway arrivals under two point delay") {
    TrafficSpec spec;
    spec.inter_gen = DistSpec::erlang(2, 60.0);
    spec.delay = TrafficSpec::Delay::kTwoPoint;
    spec.two_point_d1 = 1.0;
    spec.two_point_d2 = 100.0;
    spec.two_point_p = 0.5;
    spec.horizon = 300.0;
    const auto packets = generate(spec, kGateway0, 3);
    long inversions = 0;
    for (std::size_t i = 0; i + 1 < packets.size(); ++i)
        if (packets[i + 1].arrival_at(0) < packets[i].arrival_at(0)) ++inversions;
    CHECK(inversions > 0);
    // generation times stay sorted regardless
    for (std::size_t i = 0; i + 1 < packets.size(); ++i)
        CHECK(packets[i].gen_time <= packets[i + 1].gen_time);
}

TEST_CASE("erlang renewal mean matches 1/lambda") {
    const double lambda = 30.0;
    TrafficSpec spec;
    spec.inter_gen = DistSpec::erlang(2, 2.0 * lambda);
    spec.horizon = 4000.0;  // ~1.2e5 gaps
    const auto packets = generate(spec, kGateway0, 11);
    REQUIRE(packets.size() > 100000);
    std::vector<double> gaps;
    gaps.push_back(packets[0].gen_time);
    for (std::size_t i = 1; i < packets.size(); ++i)
        gaps.push_back(packets[i].gen_time - packets[i - 1].gen_time);
    double sum = 0.0, sq = 0.0;
    for (double g : gaps) {
        sum += g;
        sq += g * g;
    }
    const double mean = sum / gaps.size();
    const double var = sq / gaps.size() - mean * mean;
    const double se = std::sqrt(var / gaps.size());
    CHECK(std::fabs(mean - 1.0 / lambda) <= 2.0 * se);
}

TEST_CASE("generation is reproducible per seed") {
    TrafficSpec spec;
    spec.inter_gen = DistSpec::erlang(2, 2.0);
    spec.delay = TrafficSpec::Delay::kDist;
    spec.delay_dist = DistSpec::exponential(1.0);
    spec.horizon = 50.0;
    CHECK(generate(spec, kGateway0, 5) == generate(spec, kGateway0, 5));
    CHECK(generate(spec, kGateway0, 5) != generate(spec, kGateway0, 6));
}

TEST_CASE("multi gateway arrivals draw independent delays") {
    TrafficSpec spec;
    spec.inter_gen = DistSpec::deterministic(1.0);
    spec.delay = TrafficSpec::Delay::kDist;
    spec.delay_dist = DistSpec::exponential(2.0);
    spec.horizon = 100.0;
    const auto packets = generate(spec, {0, 3}, 9);
    bool differ = false;
    for (const Packet& pkt : packets) {
        REQUIRE(pkt.gw_arrival.size() == 2);
        CHECK(pkt.arrival_at(0) >= pkt.gen_time);
        CHECK(pkt.arrival_at(3) >= pkt.gen_time);
        differ = differ || pkt.arrival_at(0) != pkt.arrival_at(3);
    }
    CHECK(differ);
}

TEST_CASE("trace round trip") {
    TrafficSpec spec;
    spec.inter_gen = DistSpec::erlang(2, 4.0);
    spec.delay = TrafficSpec::Delay::kTwoPoint;
    spec.two_point_d1 = 0.5;
    spec.two_point_d2 = 7.0;
    spec.two_point_p = 0.25;
    spec.horizon = 500.0;
    const auto packets = generate(spec, kGateway0, 21);
    REQUIRE(packets.size() > 900);
    const std::string path = "trace_roundtrip.csv";
    save_trace(packets, path);
    CHECK(load_trace(path) == packets);
    std::remove(path.c_str());
}

TEST_CASE("trace validation") {
    const std::string path = "trace_invalid.csv";
    SUBCASE("arrival precedes generation") {
        std::ofstream(path) << "id,gen_time,gateway,arrival_time\n1,5.0,0,4.0\n";
        CHECK_THROWS_WITH_AS(load_trace(path), "trace_invalid.csv:2: arrival precedes generation",
                             std::runtime_error);
    }
    SUBCASE("non monotone generation times") {
        std::ofstream(path) << "id,gen_time,gateway,arrival_time\n1,5.0,0,5.0\n2,4.0,0,9.0\n";
        CHECK_THROWS_WITH_AS(load_trace(path),
                             "trace_invalid.csv:3: generation times not non-decreasing",
                             std::runtime_error);
    }
    SUBCASE("malformed row") {
        std::ofstream(path) << "id,gen_time,gateway,arrival_time\n1,abc,0,4.0\n";
        CHECK_THROWS_AS(load_trace(path), std::runtime_error);
    }
    SUBCASE("empty file is an empty trace") {
        std::ofstream(path) << "";
        CHECK(load_trace(path).empty());
    }
    std::remove(path.c_str());
}

TEST_CASE("negative delay rejected") {
    TrafficSpec spec;
    spec.inter_gen = DistSpec::deterministic(1.0);
    spec.delay = TrafficSpec::Delay::kTwoPoint;
    spec.two_point_d1 = -1.0;
    spec.two_point_d2 = 2.0;
    spec.horizon = 10.0;
    CHECK_THROWS_AS(generate(spec, kGateway0, 1), std::invalid_argument);
}

#include "aoisim/traffic.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aoisim {

namespace {

double draw_delay(const TrafficSpec& spec, int gateway, int packet_id, std::uint64_t seed) {
    switch (spec.delay) {
        case TrafficSpec::Delay::kZero:
            return 0.0;
        case TrafficSpec::Delay::kTwoPoint: {
            DrawStream stream(StreamKey{seed, StreamPurpose::kDelay,
                                        static_cast<std::uint64_t>(gateway),
                                        static_cast<std::uint64_t>(packet_id)});
            return stream.uniform() < spec.two_point_p ? spec.two_point_d1
                                                       : spec.two_point_d2;
        }
        case TrafficSpec::Delay::kDist:
            return sample(spec.delay_dist,
                          StreamKey{seed, StreamPurpose::kDelay,
                                    static_cast<std::uint64_t>(gateway),
                                    static_cast<std::uint64_t>(packet_id)});
    }
    return 0.0;
}

void validate_delay(const TrafficSpec& spec) {
    if (spec.delay == TrafficSpec::Delay::kTwoPoint) {
        if (spec.two_point_d1 < 0.0 || spec.two_point_d2 < 0.0)
            throw std::invalid_argument("gateway delay must be non-negative");
        if (spec.two_point_p < 0.0 || spec.two_point_p > 1.0)
            throw std::invalid_argument("two-point delay probability must be in [0,1]");
    }
    if (spec.delay == TrafficSpec::Delay::kDist) spec.delay_dist.validate();
}

}  // namespace

std::vector<Packet> generate(const TrafficSpec& spec, const std::vector<int>& gateways,
                             std::uint64_t seed) {
    if (spec.gen == TrafficSpec::Gen::kTrace) return load_trace(spec.trace_path);
    if (!(spec.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    spec.inter_gen.validate();
    validate_delay(spec);

    std::vector<Packet> packets;
    double t = 0.0;
    for (int id = 1;; ++id) {
        t += sample(spec.inter_gen, StreamKey{seed, StreamPurpose::kGeneration, 0,
                                              static_cast<std::uint64_t>(id)});
        if (t > spec.horizon) break;
        Packet pkt;
        pkt.id = id;
        pkt.gen_time = t;
        for (int g : gateways)
            pkt.gw_arrival.emplace_back(g, t + draw_delay(spec, g, id, seed));
        packets.push_back(std::move(pkt));
    }
    return packets;
}

void save_trace(const std::vector<Packet>& packets, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "id,gen_time,gateway,arrival_time\n";
    char buf[128];
    for (const Packet& pkt : packets) {
        for (const auto& [g, a] : pkt.gw_arrival) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g\n", pkt.id, pkt.gen_time, g, a);
            out << buf;
        }
    }
}

std::vector<Packet> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) return {};  // empty file: empty trace
    if (line != "id,gen_time,gateway,arrival_time")
        throw std::runtime_error(path + ": unexpected header '" + line + "'");

    std::vector<Packet> packets;
    double prev_gen = -1.0;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell;
        int id = 0, gateway = 0;
        double gen = 0.0, arrival = 0.0;
        try {
            if (!std::getline(fields, cell, ',')) throw std::invalid_argument("id");
            id = std::stoi(cell);
            if (!std::getline(fields, cell, ',')) throw std::invalid_argument("gen_time");
            gen = std::stod(cell);
            if (!std::getline(fields, cell, ',')) throw std::invalid_argument("gateway");
            gateway = std::stoi(cell);
            if (!std::getline(fields, cell, ',')) throw std::invalid_argument("arrival_time");
            arrival = std::stod(cell);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(row) + ": malformed row '" +
                                     line + "'");
        }
        if (arrival < gen)
            throw std::runtime_error(path + ":" + std::to_string(row) +
                                     ": arrival precedes generation");
        if (packets.empty() || packets.back().id != id) {
            if (!packets.empty() && id < packets.back().id)
                throw std::runtime_error(path + ":" + std::to_string(row) +
                                         ": rows not sorted by id");
            if (gen < prev_gen)
                throw std::runtime_error(path + ":" + std::to_string(row) +
                                         ": generation times not non-decreasing");
            prev_gen = gen;
            Packet pkt;
            pkt.id = id;
            pkt.gen_time = gen;
            packets.push_back(std::move(pkt));
        } else if (packets.back().gen_time != gen) {
            throw std::runtime_error(path + ":" + std::to_string(row) +
                                     ": conflicting gen_time for id " + std::to_string(id));
        }
        packets.back().gw_arrival.emplace_back(gateway, arrival);
    }
    return packets;
}

}  // namespace aoisim

#pragma once

#include <utility>
#include <vector>

#include "aoisim/dist.hpp"

namespace aoisim {

// Queued packets only; the in-service packet never counts against a buffer.
inline constexpr int kInfiniteBuffer = -1;

struct Packet {
    int id = 0;           // 1-based generation index
    double gen_time = 0.0;
    // (gateway node, arrival time at that gateway); sorted by gateway id.
    std::vector<std::pair<int, double>> gw_arrival;

    double arrival_at(int gateway) const;
    bool operator==(const Packet&) const = default;
};

struct LinkSpec {
    int from = 0;
    int to = 0;
    int buffer = kInfiniteBuffer;
    DistSpec dist;

    bool operator==(const LinkSpec&) const = default;
};

// Plain description as it appears in a topology config.
struct NetworkSpec {
    int node_count = 0;
    std::vector<LinkSpec> links;
    std::vector<int> gateways{0};
};

struct Network {
    int node_count = 0;
    std::vector<LinkSpec> links;
    std::vector<int> gateways;
    bool tree_restricted = false;  // every non-gateway node has exactly one incoming link

    std::vector<std::vector<int>> out_links;  // node -> link indices
    std::vector<std::vector<int>> in_links;

    bool is_gateway(int node) const;
    int find_link(int from, int to) const;  // -1 if absent
    NetworkSpec to_spec() const;
};

// Validates and indexes the topology. Throws std::invalid_argument on
// self-loops, duplicate links, empty/out-of-range gateway sets, or nodes
// unreachable from every gateway.
Network build_network(const NetworkSpec& spec);

struct HopDecomposition {
    std::vector<std::vector<int>> hop_sets;  // hop_sets[k] = nodes at BFS depth k
    // Tree networks only: path_to[j] = node sequence from hop 1 to j itself.
    // Empty vectors for gateways; whole field empty for non-tree networks.
    std::vector<std::vector<int>> path_to;

    int hop_of(int node) const;
};

HopDecomposition hop_decompose(const Network& net);

}  // namespace aoisim

#include "aoisim/network.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

namespace aoisim {

double Packet::arrival_at(int gateway) const {
    for (const auto& [g, t] : gw_arrival)
        if (g == gateway) return t;
    throw std::invalid_argument("packet " + std::to_string(id) +
                                " has no arrival at gateway " + std::to_string(gateway));
}

bool Network::is_gateway(int node) const {
    return std::find(gateways.begin(), gateways.end(), node) != gateways.end();
}

int Network::find_link(int from, int to) const {
    for (size_t i = 0; i < links.size(); ++i)
        if (links[i].from == from && links[i].to == to) return static_cast<int>(i);
    return -1;
}

NetworkSpec Network::to_spec() const {
    return NetworkSpec{node_count, links, gateways};
}

Network build_network(const NetworkSpec& spec) {
    if (spec.node_count <= 0)
        throw std::invalid_argument("network needs at least one node");
    if (spec.gateways.empty())
        throw std::invalid_argument("gateway set must not be empty");

    Network net;
    net.node_count = spec.node_count;
    net.links = spec.links;
    net.gateways = spec.gateways;
    std::sort(net.gateways.begin(), net.gateways.end());
    net.gateways.erase(std::unique(net.gateways.begin(), net.gateways.end()),
                       net.gateways.end());

    auto check_node = [&](int n, const char* what) {
        if (n < 0 || n >= net.node_count)
            throw std::invalid_argument(std::string(what) + " " + std::to_string(n) +
                                        " out of range [0," +
                                        std::to_string(net.node_count - 1) + "]");
    };
    for (int g : net.gateways) check_node(g, "gateway");

    net.out_links.assign(net.node_count, {});
    net.in_links.assign(net.node_count, {});
    std::set<std::pair<int, int>> seen;
    for (size_t i = 0; i < net.links.size(); ++i) {
        const LinkSpec& link = net.links[i];
        check_node(link.from, "link origin");
        check_node(link.to, "link destination");
        if (link.from == link.to)
            throw std::invalid_argument("self-loop at node " + std::to_string(link.from));
        if (!seen.insert({link.from, link.to}).second)
            throw std::invalid_argument("duplicate link (" + std::to_string(link.from) +
                                        "," + std::to_string(link.to) + ")");
        if (link.buffer < 0 && link.buffer != kInfiniteBuffer)
            throw std::invalid_argument("negative buffer on link (" +
                                        std::to_string(link.from) + "," +
                                        std::to_string(link.to) + ")");
        link.dist.validate();
        net.out_links[link.from].push_back(static_cast<int>(i));
        net.in_links[link.to].push_back(static_cast<int>(i));
    }

    // reachability from the gateway set
    std::vector<char> reached(net.node_count, 0);
    std::deque<int> frontier;
    for (int g : net.gateways) {
        reached[g] = 1;
        frontier.push_back(g);
    }
    while (!frontier.empty()) {
        const int node = frontier.front();
        frontier.pop_front();
        for (int li : net.out_links[node]) {
            const int next = net.links[li].to;
            if (!reached[next]) {
                reached[next] = 1;
                frontier.push_back(next);
            }
        }
    }
    for (int n = 0; n < net.node_count; ++n)
        if (!reached[n])
            throw std::invalid_argument("unreachable node " + std::to_string(n));

    net.tree_restricted = true;
    for (int n = 0; n < net.node_count; ++n) {
        if (net.is_gateway(n)) continue;
        if (net.in_links[n].size() != 1) {
            net.tree_restricted = false;
            break;
        }
    }
    return net;
}

int HopDecomposition::hop_of(int node) const {
    for (size_t k = 0; k < hop_sets.size(); ++k)
        if (std::find(hop_sets[k].begin(), hop_sets[k].end(), node) != hop_sets[k].end())
            return static_cast<int>(k);
    return -1;
}

HopDecomposition hop_decompose(const Network& net) {
    HopDecomposition hd;
    std::vector<int> depth(net.node_count, -1);
    std::deque<int> frontier;
    for (int g : net.gateways) {
        depth[g] = 0;
        frontier.push_back(g);
    }
    while (!frontier.empty()) {
        const int node = frontier.front();
        frontier.pop_front();
        for (int li : net.out_links[node]) {
            const int next = net.links[li].to;
            if (depth[next] < 0) {
                depth[next] = depth[node] + 1;
                frontier.push_back(next);
            }
        }
    }
    const int max_depth = *std::max_element(depth.begin(), depth.end());
    hd.hop_sets.assign(max_depth + 1, {});
    for (int n = 0; n < net.node_count; ++n) hd.hop_sets[depth[n]].push_back(n);

    if (net.tree_restricted) {
        hd.path_to.assign(net.node_count, {});
        for (int n = 0; n < net.node_count; ++n) {
            if (net.is_gateway(n)) continue;
            std::vector<int> path;
            int cur = n;
            while (!net.is_gateway(cur)) {
                path.push_back(cur);
                cur = net.links[net.in_links[cur][0]].from;
            }
            std::reverse(path.begin(), path.end());
            hd.path_to[n] = std::move(path);
        }
    }
    return hd;
}

}  // namespace aoisim

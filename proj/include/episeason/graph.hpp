#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "episeason/error.hpp"
#include "episeason/rng.hpp"

namespace episeason {

// Immutable undirected simple graph in CSR form. Neighbor lists are sorted.
// Construction validates simplicity; after that the object is safe to share
// across threads.
class Network {
public:
    Network() = default;

    // Builds from a list of undirected edges, each given once in either
    // orientation. Self-loops and duplicates are construction errors here;
    // load_edge_list() is the lenient entry point for raw data.
    static Network from_edges(int node_count, std::span<const std::pair<int, int>> edges) {
        if (node_count < 0) fail("param", "negative node count");
        Network net;
        net.offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
        for (const auto& [u, v] : edges) {
            if (u < 0 || v < 0 || u >= node_count || v >= node_count)
                fail("param", "edge endpoint out of range");
            if (u == v) fail("param", "self-loop in edge list");
            ++net.offsets_[static_cast<std::size_t>(u) + 1];
            ++net.offsets_[static_cast<std::size_t>(v) + 1];
        }
        for (std::size_t i = 1; i < net.offsets_.size(); ++i)
            net.offsets_[i] += net.offsets_[i - 1];
        net.targets_.resize(net.offsets_.back());
        std::vector<std::size_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
        for (const auto& [u, v] : edges) {
            net.targets_[cursor[static_cast<std::size_t>(u)]++] = v;
            net.targets_[cursor[static_cast<std::size_t>(v)]++] = u;
        }
        for (int u = 0; u < node_count; ++u) {
            auto nb = net.mutable_neighbors(u);
            std::sort(nb.begin(), nb.end());
            if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
                fail("param", "duplicate edge in edge list");
        }
        return net;
    }

    int node_count() const { return static_cast<int>(offsets_.size()) - 1; }

    std::size_t edge_count() const { return targets_.size() / 2; }

    int degree(int u) const {
        return static_cast<int>(offsets_[static_cast<std::size_t>(u) + 1] -
                                offsets_[static_cast<std::size_t>(u)]);
    }

    std::span<const int> neighbors(int u) const {
        return {targets_.data() + offsets_[static_cast<std::size_t>(u)],
                targets_.data() + offsets_[static_cast<std::size_t>(u) + 1]};
    }

    bool has_edge(int u, int v) const {
        const auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    int max_degree() const {
        int best = 0;
        for (int u = 0; u < node_count(); ++u) best = std::max(best, degree(u));
        return best;
    }

private:
    std::span<int> mutable_neighbors(int u) {
        return {targets_.data() + offsets_[static_cast<std::size_t>(u)],
                targets_.data() + offsets_[static_cast<std::size_t>(u) + 1]};
    }

    std::vector<std::size_t> offsets_{0};
    std::vector<int> targets_;
};

// Reads a SNAP-style edge list: '#' lines are comments, every other line is a
// whitespace-separated integer pair. Directed edges are symmetrized,
// self-loops and duplicate edges dropped, and node ids remapped densely in
// increasing order of original id. The result may be disconnected; nodes
// that appear only in dropped self-loops are kept as isolated nodes.
inline Network load_edge_list(std::istream& in) {
    std::vector<std::pair<long long, long long>> raw;
    std::vector<long long> mentioned;
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream iss(line);
        long long a = 0, b = 0;
        std::string rest;
        if (!(iss >> a >> b) || (iss >> rest))
            fail("parse", "malformed edge line " + std::to_string(lineno) + ": " + line);
        raw.emplace_back(a, b);
        mentioned.push_back(a);
        mentioned.push_back(b);
    }
    if (raw.empty()) fail("parse", "empty edge set");

    std::sort(mentioned.begin(), mentioned.end());
    mentioned.erase(std::unique(mentioned.begin(), mentioned.end()), mentioned.end());
    std::unordered_map<long long, int> index;
    index.reserve(mentioned.size());
    for (std::size_t i = 0; i < mentioned.size(); ++i)
        index.emplace(mentioned[i], static_cast<int>(i));

    std::vector<std::pair<int, int>> edges;
    edges.reserve(raw.size());
    for (const auto& [a, b] : raw) {
        if (a == b) continue;
        int u = index[a], v = index[b];
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.empty()) fail("parse", "empty edge set");

    return Network::from_edges(static_cast<int>(mentioned.size()), edges);
}

// Writes the same format back: one "u v" line per undirected edge, smaller
// id first, ascending.
inline void save_edge_list(const Network& net, std::ostream& out) {
    out << "# nodes " << net.node_count() << " edges " << net.edge_count() << '\n';
    for (int u = 0; u < net.node_count(); ++u) {
        for (int v : net.neighbors(u)) {
            if (u < v) out << u << ' ' << v << '\n';
        }
    }
}

// Induced subgraph on the largest connected component, node ids remapped
// densely preserving their order. Ties go to the component holding the
// smallest node id.
inline Network giant_component(const Network& net) {
    const int n = net.node_count();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int best_comp = -1;
    std::size_t best_size = 0;
    int comps = 0;
    std::vector<int> queue;
    for (int start = 0; start < n; ++start) {
        if (comp[static_cast<std::size_t>(start)] >= 0) continue;
        const int c = comps++;
        std::size_t size = 0;
        queue.assign(1, start);
        comp[static_cast<std::size_t>(start)] = c;
        while (!queue.empty()) {
            const int u = queue.back();
            queue.pop_back();
            ++size;
            for (int v : net.neighbors(u)) {
                if (comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = c;
                    queue.push_back(v);
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best_comp = c;
        }
    }
    if (best_comp < 0) return Network{};

    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int u = 0; u < n; ++u)
        if (comp[static_cast<std::size_t>(u)] == best_comp) remap[static_cast<std::size_t>(u)] = next++;
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
        if (comp[static_cast<std::size_t>(u)] != best_comp) continue;
        for (int v : net.neighbors(u))
            if (u < v) edges.emplace_back(remap[static_cast<std::size_t>(u)], remap[static_cast<std::size_t>(v)]);
    }
    return Network::from_edges(next, edges);
}

// Barabasi-Albert preferential attachment: seed clique of m+1 nodes, then
// each new node links to m distinct existing nodes chosen with probability
// proportional to current degree (repeated-node-list sampling, duplicate
// targets rejected). Connected by construction.
inline Network generate_ba(int n, int m, Rng& rng) {
    if (m < 1) fail("param", "ba generator needs m >= 1");
    if (n <= m) fail("param", "ba generator needs n > m");

    std::vector<std::pair<int, int>> edges;
    std::vector<int> endpoint_pool;
    for (int u = 0; u <= m; ++u) {
        for (int v = u + 1; v <= m; ++v) {
            edges.emplace_back(u, v);
            endpoint_pool.push_back(u);
            endpoint_pool.push_back(v);
        }
    }
    std::vector<int> targets;
    targets.reserve(static_cast<std::size_t>(m));
    for (int u = m + 1; u < n; ++u) {
        targets.clear();
        while (static_cast<int>(targets.size()) < m) {
            const int t = endpoint_pool[uniform_index(rng, endpoint_pool.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (int t : targets) {
            edges.emplace_back(t, u);
            endpoint_pool.push_back(t);
            endpoint_pool.push_back(u);
        }
    }
    return Network::from_edges(n, edges);
}

} // namespace episeason

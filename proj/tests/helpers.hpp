#pragma once

// Test utilities and independent oracles. Everything here works on plain
// (node count, edge list) data so it stays independent of the library's own
// graph machinery.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "episeason/graph.hpp"
#include "episeason/rng.hpp"

namespace testutil {

using Edge = std::pair<int, int>;
using EdgeList = std::vector<Edge>;

inline episeason::Network make_net(int n, const EdgeList& edges) {
    return episeason::Network::from_edges(n, edges);
}

inline EdgeList path_edges(int n) {
    EdgeList e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return e;
}

inline EdgeList ring_edges(int n) {
    EdgeList e = path_edges(n);
    e.emplace_back(n - 1, 0);
    return e;
}

// Node 0 is the hub.
inline EdgeList star_edges(int leaves) {
    EdgeList e;
    for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return e;
}

inline EdgeList complete_edges(int n) {
    EdgeList e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return e;
}

inline std::vector<std::vector<int>> adjacency(int n, const EdgeList& edges) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& [u, v] : edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
}

// Connected components by plain BFS; each component's nodes come back sorted.
inline std::vector<std::vector<int>> oracle_components(int n, const EdgeList& edges) {
    const auto adj = adjacency(n, edges);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> comps;
    for (int start = 0; start < n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        std::vector<int> comp, stack{start};
        seen[static_cast<std::size_t>(start)] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (int v : adj[static_cast<std::size_t>(u)]) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    stack.push_back(v);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

// Floyd-Warshall; -1 marks unreachable pairs.
inline std::vector<std::vector<int>> oracle_all_pairs(int n, const EdgeList& edges) {
    const int inf = 1 << 29;
    std::vector<std::vector<int>> d(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n), inf));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0;
    for (const auto& [u, v] : edges) {
        d[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
        d[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    std::min(d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                             d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +
                                 d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
    for (auto& row : d)
        for (int& x : row)
            if (x >= inf) x = -1;
    return d;
}

// Literal peel simulation: for s = 1, 2, ... repeatedly rescan and remove
// every node whose remaining degree is <= s, recording s as its shell.
inline std::vector<int> oracle_k_shell(int n, const EdgeList& edges) {
    auto adj = adjacency(n, edges);
    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    std::vector<int> shell(static_cast<std::size_t>(n), 0);
    int remaining = n;
    const auto live_degree = [&](int u) {
        int d = 0;
        for (int v : adj[static_cast<std::size_t>(u)])
            if (!removed[static_cast<std::size_t>(v)]) ++d;
        return d;
    };
    for (int s = 1; remaining > 0; ++s) {
        bool peeled = true;
        while (peeled) {
            peeled = false;
            for (int u = 0; u < n; ++u) {
                if (removed[static_cast<std::size_t>(u)]) continue;
                if (live_degree(u) <= s) {
                    removed[static_cast<std::size_t>(u)] = 1;
                    shell[static_cast<std::size_t>(u)] = s;
                    --remaining;
                    peeled = true;
                }
            }
        }
    }
    return shell;
}

// Erdos-Renyi G(n, p) edge list.
inline EdgeList random_gnp(int n, double p, episeason::Rng& rng) {
    EdgeList e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (episeason::chance(rng, p)) e.emplace_back(i, j);
    return e;
}

inline double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double stderr_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0)) /
           std::sqrt(static_cast<double>(xs.size()));
}

inline bool same_network(const episeason::Network& a, const episeason::Network& b) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
    for (int u = 0; u < a.node_count(); ++u) {
        const auto na = a.neighbors(u);
        const auto nb = b.neighbors(u);
        if (!std::equal(na.begin(), na.end(), nb.begin(), nb.end())) return false;
    }
    return true;
}

} // namespace testutil

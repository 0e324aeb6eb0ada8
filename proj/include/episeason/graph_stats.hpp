#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "episeason/error.hpp"
#include "episeason/graph.hpp"

namespace episeason {

// Degree distribution P(k) with support 0..max_degree. Probabilities are
// validated to be nonnegative and to sum to 1 within 1e-12.
class DegreeDistribution {
public:
    explicit DegreeDistribution(std::vector<double> prob) : prob_(std::move(prob)) {
        if (prob_.empty()) fail("param", "empty degree distribution");
        double sum = 0.0;
        for (double p : prob_) {
            if (p < 0.0) fail("param", "negative degree probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) fail("param", "degree probabilities must sum to 1");
        mean_ = 0.0;
        mean2_ = 0.0;
        for (std::size_t k = 0; k < prob_.size(); ++k) {
            mean_ += static_cast<double>(k) * prob_[k];
            mean2_ += static_cast<double>(k) * static_cast<double>(k) * prob_[k];
        }
    }

    static DegreeDistribution from_network(const Network& net) {
        if (net.node_count() == 0) fail("param", "empty network");
        std::vector<double> prob(static_cast<std::size_t>(net.max_degree()) + 1, 0.0);
        const double w = 1.0 / net.node_count();
        for (int u = 0; u < net.node_count(); ++u)
            prob[static_cast<std::size_t>(net.degree(u))] += w;
        return DegreeDistribution(std::move(prob));
    }

    // Two-column "k P(k)" text input, '#' comments allowed. Small rounding in
    // hand-written files is tolerated and renormalized.
    static DegreeDistribution from_stream(std::istream& in) {
        std::vector<double> prob;
        std::string line;
        long long lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::istringstream iss(line);
            long long k = 0;
            double p = 0.0;
            std::string rest;
            if (!(iss >> k >> p) || (iss >> rest) || k < 0 || p < 0.0)
                fail("parse", "malformed distribution line " + std::to_string(lineno));
            if (static_cast<std::size_t>(k) >= prob.size()) prob.resize(static_cast<std::size_t>(k) + 1, 0.0);
            if (prob[static_cast<std::size_t>(k)] != 0.0)
                fail("parse", "duplicate degree " + std::to_string(k));
            prob[static_cast<std::size_t>(k)] = p;
        }
        if (prob.empty()) fail("parse", "empty degree distribution");
        double sum = 0.0;
        for (double p : prob) sum += p;
        if (std::abs(sum - 1.0) > 1e-6) fail("parse", "degree probabilities sum to " + std::to_string(sum));
        for (double& p : prob) p /= sum;
        return DegreeDistribution(std::move(prob));
    }

    double prob(int k) const {
        return (k >= 0 && static_cast<std::size_t>(k) < prob_.size()) ? prob_[static_cast<std::size_t>(k)] : 0.0;
    }
    int max_degree() const { return static_cast<int>(prob_.size()) - 1; }
    double mean() const { return mean_; }
    double second_moment() const { return mean2_; }
    const std::vector<double>& probabilities() const { return prob_; }

private:
    std::vector<double> prob_;
    double mean_ = 0.0;
    double mean2_ = 0.0;
};

struct NetworkStats {
    DegreeDistribution distribution;
    double mean_degree;
    double mean_square_degree;
    double mean_clustering;
};

// Empirical P(k), first/second degree moments, and mean local clustering
// coefficient (nodes of degree < 2 contribute 0).
inline NetworkStats degree_stats(const Network& net) {
    const int n = net.node_count();
    if (n == 0) fail("param", "empty network");

    double clustering_sum = 0.0;
    for (int u = 0; u < n; ++u) {
        const int d = net.degree(u);
        if (d < 2) continue;
        const auto nb_u = net.neighbors(u);
        long long closed = 0; // ordered neighbor pairs of u that are adjacent
        for (int v : nb_u) {
            const auto nb_v = net.neighbors(v);
            std::size_t i = 0, j = 0;
            while (i < nb_u.size() && j < nb_v.size()) {
                if (nb_u[i] == nb_v[j]) {
                    ++closed;
                    ++i;
                    ++j;
                } else if (nb_u[i] < nb_v[j]) {
                    ++i;
                } else {
                    ++j;
                }
            }
        }
        clustering_sum += static_cast<double>(closed) / (static_cast<double>(d) * (d - 1));
    }

    auto dist = DegreeDistribution::from_network(net);
    const double mean_k = dist.mean();
    const double mean_k2 = dist.second_moment();
    return NetworkStats{std::move(dist), mean_k, mean_k2, clustering_sum / n};
}

// k-core decomposition: for s = 1, 2, ... iteratively peel nodes whose
// remaining degree is <= s; a node's shell is the s at which it was peeled.
inline std::vector<int> k_shell(const Network& net) {
    const int n = net.node_count();
    std::vector<int> shell(static_cast<std::size_t>(n), 0);
    std::vector<int> deg(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) deg[static_cast<std::size_t>(u)] = net.degree(u);
    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    int remaining = n;
    std::vector<int> queue;
    for (int s = 1; remaining > 0; ++s) {
        queue.clear();
        for (int u = 0; u < n; ++u)
            if (!removed[static_cast<std::size_t>(u)] && deg[static_cast<std::size_t>(u)] <= s)
                queue.push_back(u);
        while (!queue.empty()) {
            const int u = queue.back();
            queue.pop_back();
            if (removed[static_cast<std::size_t>(u)]) continue;
            removed[static_cast<std::size_t>(u)] = 1;
            shell[static_cast<std::size_t>(u)] = s;
            --remaining;
            for (int v : net.neighbors(u)) {
                if (!removed[static_cast<std::size_t>(v)] && --deg[static_cast<std::size_t>(v)] <= s)
                    queue.push_back(v);
            }
        }
    }
    return shell;
}

// Mean shortest-path length in the full graph over all unordered pairs
// within `nodes`. Requires at least two distinct nodes and a graph that
// connects them.
inline double mean_pairwise_distance(const Network& net, std::span<const int> nodes) {
    std::vector<int> set(nodes.begin(), nodes.end());
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.size() < 2) fail("param", "pairwise distance needs at least 2 nodes");

    const int n = net.node_count();
    std::vector<int> position(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < set.size(); ++i) position[static_cast<std::size_t>(set[i])] = static_cast<int>(i);

    double total = 0.0;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> frontier, next;
    for (std::size_t i = 0; i + 1 < set.size(); ++i) {
        std::fill(dist.begin(), dist.end(), -1);
        const int src = set[i];
        dist[static_cast<std::size_t>(src)] = 0;
        frontier.assign(1, src);
        std::size_t found = 0;
        int d = 0;
        while (!frontier.empty() && found < set.size() - i - 1) {
            next.clear();
            ++d;
            for (int u : frontier) {
                for (int v : net.neighbors(u)) {
                    if (dist[static_cast<std::size_t>(v)] >= 0) continue;
                    dist[static_cast<std::size_t>(v)] = d;
                    next.push_back(v);
                    const int pos = position[static_cast<std::size_t>(v)];
                    if (pos > static_cast<int>(i)) {
                        total += d;
                        ++found;
                    }
                }
            }
            frontier.swap(next);
        }
        if (found < set.size() - i - 1) fail("param", "node set is not connected in the graph");
    }
    const double pairs = static_cast<double>(set.size()) * (static_cast<double>(set.size()) - 1.0) / 2.0;
    return total / pairs;
}

} // namespace episeason

#pragma once

#include <algorithm>
#include <iterator>
#include <span>
#include <vector>

#include "episeason/error.hpp"
#include "episeason/graph_stats.hpp"
#include "episeason/immunize.hpp"

namespace episeason {

namespace detail {

inline std::size_t intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++count;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return count;
}

inline std::size_t fixed_cardinality(const SeasonHistory& history) {
    if (history.seasons.empty()) fail("param", "empty season history");
    const std::size_t card = history.seasons.front().vaccinated.members.size();
    if (card == 0) fail("param", "no vaccinated nodes: recurrence metrics undefined");
    return card;
}

} // namespace detail

// Q_lag(S) = |V_S intersect V_{S-lag}| / (vN) for S = lag+1 .. S_max.
// Element i of the result is the value at season lag+1+i.
inline std::vector<double> recurrence(const SeasonHistory& history, int lag) {
    if (lag != 1 && lag != 2) fail("param", "recurrence lag must be 1 or 2");
    const int total = static_cast<int>(history.seasons.size());
    if (total < lag + 1) fail("param", "history too short for requested recurrence lag");
    const double card = static_cast<double>(detail::fixed_cardinality(history));

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(total - lag));
    for (int s = lag + 1; s <= total; ++s) {
        const auto& a = history.seasons[static_cast<std::size_t>(s - 1)].vaccinated.members;
        const auto& b = history.seasons[static_cast<std::size_t>(s - 1 - lag)].vaccinated.members;
        values.push_back(static_cast<double>(detail::intersection_size(a, b)) / card);
    }
    return values;
}

// A_{S'}(S) = |intersection of V_t for t = S..S'| / (vN) for S = 2..S'-1.
// Season 1 is excluded. Element i of the result is the value at S = 2+i.
inline std::vector<double> continuous_streak(const SeasonHistory& history, int upto) {
    const int total = static_cast<int>(history.seasons.size());
    if (upto < 3) fail("param", "continuous streak needs S' >= 3");
    if (upto > total) fail("param", "history too short for requested S'");
    const double card = static_cast<double>(detail::fixed_cardinality(history));

    std::vector<double> values(static_cast<std::size_t>(upto - 2), 0.0);
    std::vector<int> running = history.seasons[static_cast<std::size_t>(upto - 1)].vaccinated.members;
    std::vector<int> tmp;
    for (int s = upto - 1; s >= 2; --s) {
        const auto& vs = history.seasons[static_cast<std::size_t>(s - 1)].vaccinated.members;
        tmp.clear();
        std::set_intersection(running.begin(), running.end(), vs.begin(), vs.end(),
                              std::back_inserter(tmp));
        running.swap(tmp);
        values[static_cast<std::size_t>(s - 2)] = static_cast<double>(running.size()) / card;
    }
    return values;
}

// F_{S'}(i) for i = 1..S'-1: among nodes vaccinated at least once in seasons
// 2..S', the fraction vaccinated exactly i times (not necessarily
// continuously). Element i-1 of the result is F(i); the values sum to 1.
inline std::vector<double> repeat_frequency(const SeasonHistory& history, int upto) {
    const int total = static_cast<int>(history.seasons.size());
    if (upto < 3) fail("param", "repeat frequency needs S' >= 3");
    if (upto > total) fail("param", "history too short for requested S'");

    std::vector<int> times; // per node, seasons 2..S'
    for (int s = 2; s <= upto; ++s) {
        for (int u : history.seasons[static_cast<std::size_t>(s - 1)].vaccinated.members) {
            if (static_cast<std::size_t>(u) >= times.size()) times.resize(static_cast<std::size_t>(u) + 1, 0);
            ++times[static_cast<std::size_t>(u)];
        }
    }
    std::vector<double> freq(static_cast<std::size_t>(upto - 1), 0.0);
    double ever = 0.0;
    for (int c : times) {
        if (c > 0) {
            ++ever;
            ++freq[static_cast<std::size_t>(c - 1)];
        }
    }
    if (ever == 0.0) fail("param", "no node was ever vaccinated in the window");
    for (double& f : freq) f /= ever;
    return freq;
}

struct SetStats {
    double mean_degree;
    double mean_kshell;
    double mean_distance;
};

// Mean degree, mean k-shell index, and mean pairwise shortest-path distance
// of a node set. `shells` must be the k_shell() result for the same network.
inline SetStats node_set_stats(const Network& net, std::span<const int> nodes,
                               std::span<const int> shells) {
    if (nodes.size() < 2) fail("param", "set statistics need at least 2 nodes");
    double deg = 0.0, shell = 0.0;
    for (int u : nodes) {
        deg += net.degree(u);
        shell += shells[static_cast<std::size_t>(u)];
    }
    const double inv = 1.0 / static_cast<double>(nodes.size());
    return {deg * inv, shell * inv, mean_pairwise_distance(net, nodes)};
}

struct VaccinatedProfile {
    SetStats vaccinated;
    SetStats network; // whole-network baseline
};

// The three structural statistics of the vaccinated set, alongside the same
// statistics of the entire network.
inline VaccinatedProfile vaccinated_profile(const Network& net, const VaccinationSet& vset) {
    const auto shells = k_shell(net);
    std::vector<int> all(static_cast<std::size_t>(net.node_count()));
    for (int u = 0; u < net.node_count(); ++u) all[static_cast<std::size_t>(u)] = u;
    return {node_set_stats(net, vset.members, shells), node_set_stats(net, all, shells)};
}

} // namespace episeason

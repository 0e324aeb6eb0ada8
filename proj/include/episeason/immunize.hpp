#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "episeason/error.hpp"
#include "episeason/graph.hpp"
#include "episeason/rng.hpp"
#include "episeason/sir.hpp"

namespace episeason {

enum class Strategy { Uniform, Targeted, Acquaintance, Dynamical };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Uniform: return "uniform";
        case Strategy::Targeted: return "targeted";
        case Strategy::Acquaintance: return "acquaintance";
        case Strategy::Dynamical: return "dynamical";
    }
    return "?";
}

inline Strategy parse_strategy(const std::string& id) {
    if (id == "uniform") return Strategy::Uniform;
    if (id == "targeted") return Strategy::Targeted;
    if (id == "acquaintance") return Strategy::Acquaintance;
    if (id == "dynamical") return Strategy::Dynamical;
    fail("param", "unknown strategy '" + id + "'");
}

// The vaccinated node set of one season. Cardinality is fixed across all
// seasons of an experiment.
struct VaccinationSet {
    std::vector<int> members; // sorted
    int season = 1;
};

inline int vaccination_count(double v, int node_count) {
    return static_cast<int>(std::floor(v * node_count + 0.5));
}

inline VaccinationSet select_uniform(const Network& net, int count, Rng& rng) {
    if (count < 0 || count > net.node_count()) fail("param", "vaccination count out of range");
    return {sample_without_replacement(net.node_count(), count, rng), 1};
}

// The `count` nodes of highest degree; ties at the cutoff degree are broken
// uniformly at random.
inline VaccinationSet select_targeted(const Network& net, int count, Rng& rng) {
    const int n = net.node_count();
    if (count < 0 || count > n) fail("param", "vaccination count out of range");
    if (count == 0) return {{}, 1};

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) order[static_cast<std::size_t>(u)] = u;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (net.degree(a) != net.degree(b)) return net.degree(a) > net.degree(b);
        return a < b;
    });
    const int cutoff = net.degree(order[static_cast<std::size_t>(count - 1)]);

    std::vector<int> chosen, ties;
    for (int u = 0; u < n; ++u) {
        if (net.degree(u) > cutoff) chosen.push_back(u);
        else if (net.degree(u) == cutoff) ties.push_back(u);
    }
    const int slots = count - static_cast<int>(chosen.size());
    const auto pick = sample_without_replacement(static_cast<int>(ties.size()), slots, rng);
    for (int i : pick) chosen.push_back(ties[static_cast<std::size_t>(i)]);
    std::sort(chosen.begin(), chosen.end());
    return {std::move(chosen), 1};
}

// Vaccinate a uniformly chosen neighbor of a uniformly chosen node, repeated
// until `count` distinct nodes are vaccinated. Degree-0 nodes can never be
// reached this way, so they bound the feasible count.
inline VaccinationSet select_acquaintance(const Network& net, int count, Rng& rng) {
    const int n = net.node_count();
    if (count < 0 || count > n) fail("param", "vaccination count out of range");
    int reachable = 0;
    for (int u = 0; u < n; ++u)
        if (net.degree(u) > 0) ++reachable;
    if (count > reachable) fail("param", "acquaintance selection cannot reach isolated nodes");

    std::vector<char> vacc(static_cast<std::size_t>(n), 0);
    int picked = 0;
    while (picked < count) {
        const int u = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
        const auto nb = net.neighbors(u);
        if (nb.empty()) continue;
        const int v = nb[uniform_index(rng, nb.size())];
        if (!vacc[static_cast<std::size_t>(v)]) {
            vacc[static_cast<std::size_t>(v)] = 1;
            ++picked;
        }
    }
    std::vector<int> members;
    members.reserve(static_cast<std::size_t>(count));
    for (int u = 0; u < n; ++u)
        if (vacc[static_cast<std::size_t>(u)]) members.push_back(u);
    return {std::move(members), 1};
}

// Infection-status score of a node at the end of a season: the number of its
// recovered neighbors, plus one if the node itself recovered. Vaccinated
// nodes cannot have recovered, so they take the susceptible branch.
inline int w_score(const Network& net, const EpidemicOutcome& outcome, int u) {
    int w = 0;
    for (int v : net.neighbors(u))
        if (outcome.state[static_cast<std::size_t>(v)] == NodeState::Recovered) ++w;
    if (outcome.state[static_cast<std::size_t>(u)] == NodeState::Recovered) ++w;
    return w;
}

// Moves every vaccinated slot to the highest-W node among the incumbent and
// its neighbors. Incumbents are processed in a fresh random order; a node
// claimed by an earlier slot is excluded from later pools. Ties keep the
// incumbent when it participates, otherwise break uniformly. If an
// incumbent's whole pool is claimed, its slot falls back to a uniformly
// random unclaimed unvaccinated node so the cardinality stays fixed.
// `trace`, when given, receives one (incumbent, successor) pair per slot.
inline VaccinationSet seasonal_update(const Network& net, const EpidemicOutcome& outcome,
                                      const VaccinationSet& current, Rng& rng,
                                      std::vector<std::pair<int, int>>* trace = nullptr) {
    const int n = net.node_count();
    std::vector<char> is_current(static_cast<std::size_t>(n), 0);
    for (int u : current.members) is_current[static_cast<std::size_t>(u)] = 1;

    std::vector<int> order = current.members;
    shuffle_ids(order, rng);

    std::vector<char> claimed(static_cast<std::size_t>(n), 0);
    std::vector<int> successors;
    successors.reserve(order.size());
    std::vector<int> pool, tied, fallback;
    for (int u : order) {
        pool.clear();
        if (!claimed[static_cast<std::size_t>(u)]) pool.push_back(u);
        for (int v : net.neighbors(u))
            if (!claimed[static_cast<std::size_t>(v)]) pool.push_back(v);

        int succ;
        if (pool.empty()) {
            fallback.clear();
            for (int w = 0; w < n; ++w)
                if (!claimed[static_cast<std::size_t>(w)] && !is_current[static_cast<std::size_t>(w)])
                    fallback.push_back(w);
            if (fallback.empty()) {
                for (int w = 0; w < n; ++w)
                    if (!claimed[static_cast<std::size_t>(w)]) fallback.push_back(w);
            }
            succ = fallback[uniform_index(rng, fallback.size())];
        } else {
            int best = -1;
            for (int y : pool) best = std::max(best, w_score(net, outcome, y));
            tied.clear();
            bool incumbent_tied = false;
            for (int y : pool) {
                if (w_score(net, outcome, y) == best) {
                    tied.push_back(y);
                    if (y == u) incumbent_tied = true;
                }
            }
            succ = incumbent_tied ? u : tied[uniform_index(rng, tied.size())];
        }
        claimed[static_cast<std::size_t>(succ)] = 1;
        successors.push_back(succ);
        if (trace) trace->emplace_back(u, succ);
    }
    std::sort(successors.begin(), successors.end());
    return {std::move(successors), current.season + 1};
}

struct SeasonRecord {
    VaccinationSet vaccinated;
    EpidemicOutcome outcome;
    double prevalence;
};

struct SeasonHistory {
    Strategy strategy;
    double beta;
    double v;
    std::uint64_t rng_seed;
    std::vector<SeasonRecord> seasons;
};

// Alternates vaccination and epidemic spreading for the requested number of
// seasons. Static strategies redraw their set every season; the dynamical
// strategy starts uniform and then migrates the set via seasonal_update.
inline SeasonHistory run_seasons(const Network& net, Strategy strategy, double beta, double v,
                                 int seasons, std::uint64_t rng_seed) {
    if (seasons < 1) fail("param", "need at least one season");
    if (!(v >= 0.0 && v < 1.0)) fail("param", "vaccinated proportion must be in [0,1)");
    const int count = vaccination_count(v, net.node_count());
    Rng rng(rng_seed);

    const auto draw = [&](Strategy s) {
        switch (s) {
            case Strategy::Uniform: return select_uniform(net, count, rng);
            case Strategy::Targeted: return select_targeted(net, count, rng);
            case Strategy::Acquaintance: return select_acquaintance(net, count, rng);
            case Strategy::Dynamical: return select_uniform(net, count, rng);
        }
        fail("param", "bad strategy");
    };

    SeasonHistory history{strategy, beta, v, rng_seed, {}};
    history.seasons.reserve(static_cast<std::size_t>(seasons));
    VaccinationSet vset = draw(strategy);
    for (int s = 1; s <= seasons; ++s) {
        vset.season = s;
        auto outcome = run_sir(net, vset.members, SpreadParams{beta}, rng);
        const double r = prevalence(outcome, net);
        VaccinationSet next;
        if (s < seasons) {
            next = (strategy == Strategy::Dynamical) ? seasonal_update(net, outcome, vset, rng)
                                                     : draw(strategy);
        }
        history.seasons.push_back({std::move(vset), std::move(outcome), r});
        vset = std::move(next);
    }
    return history;
}

} // namespace episeason

#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "episeason/error.hpp"
#include "episeason/graph.hpp"
#include "episeason/rng.hpp"

namespace episeason {

enum class NodeState : std::uint8_t { Susceptible, Recovered, Vaccinated };

// Per-edge per-step transmission probability. Recovery is certain after one
// step (mu = 1), so a node is infectious for exactly one step.
struct SpreadParams {
    double beta = 0.1;
    static constexpr double mu = 1.0;
};

struct StepCounts {
    int susceptible;
    int infected;
    int recovered;
};

struct EpidemicOutcome {
    std::vector<NodeState> state; // terminal label per node
    int seed = -1;
    int duration = 0; // synchronous steps until no infected node remained
    int recovered_count = 0;
};

// One epidemic season: seed chosen uniformly among unvaccinated nodes, then
// synchronous discrete-time SIR until extinction. Transmissions in a step are
// gathered against the step-start state, then every step-start infected node
// recovers.
inline EpidemicOutcome run_sir(const Network& net, std::span<const int> vaccinated,
                               SpreadParams params, Rng& rng,
                               std::vector<StepCounts>* step_log = nullptr) {
    if (params.beta < 0.0 || params.beta > 1.0) fail("param", "beta must be in [0,1]");
    const int n = net.node_count();

    EpidemicOutcome out;
    out.state.assign(static_cast<std::size_t>(n), NodeState::Susceptible);
    int vacc_count = 0;
    for (int u : vaccinated) {
        if (u < 0 || u >= n) fail("param", "vaccinated node out of range");
        if (out.state[static_cast<std::size_t>(u)] != NodeState::Vaccinated) {
            out.state[static_cast<std::size_t>(u)] = NodeState::Vaccinated;
            ++vacc_count;
        }
    }
    const int unvacc = n - vacc_count;
    if (unvacc <= 0) fail("param", "all nodes vaccinated: no epidemic seed available");

    std::size_t pick = uniform_index(rng, static_cast<std::size_t>(unvacc));
    int seed = -1;
    for (int u = 0; u < n; ++u) {
        if (out.state[static_cast<std::size_t>(u)] == NodeState::Vaccinated) continue;
        if (pick == 0) {
            seed = u;
            break;
        }
        --pick;
    }
    out.seed = seed;

    std::vector<char> infected(static_cast<std::size_t>(n), 0);
    infected[static_cast<std::size_t>(seed)] = 1;
    std::vector<int> frontier{seed}, next;
    int s_count = unvacc - 1, i_count = 1, r_count = 0;
    if (step_log) step_log->push_back({s_count, i_count, r_count});

    int steps = 0;
    while (!frontier.empty()) {
        next.clear();
        for (int u : frontier) {
            for (int v : net.neighbors(u)) {
                if (out.state[static_cast<std::size_t>(v)] != NodeState::Susceptible ||
                    infected[static_cast<std::size_t>(v)])
                    continue;
                if (chance(rng, params.beta)) {
                    infected[static_cast<std::size_t>(v)] = 1;
                    next.push_back(v);
                }
            }
        }
        for (int u : frontier) out.state[static_cast<std::size_t>(u)] = NodeState::Recovered;
        r_count += static_cast<int>(frontier.size());
        i_count = static_cast<int>(next.size());
        s_count -= static_cast<int>(next.size());
        ++steps;
        if (step_log) step_log->push_back({s_count, i_count, r_count});
        frontier.swap(next);
    }
    out.duration = steps;
    out.recovered_count = r_count;
    return out;
}

// Fraction of all nodes recovered at extinction.
inline double prevalence(const EpidemicOutcome& outcome, const Network& net) {
    return static_cast<double>(outcome.recovered_count) / net.node_count();
}

// Exact terminal-outcome distribution by exhaustive expansion over seeds and
// per-edge transmission events. With one-step recovery the recovered set is
// the seed's cluster under independent bond percolation at rate beta, which
// this evaluates by subset recursion. Capacity-limited to 12 unvaccinated
// nodes.
inline std::map<std::vector<int>, double>
exact_outcome_distribution(const Network& net, std::span<const int> vaccinated, SpreadParams params) {
    if (params.beta < 0.0 || params.beta > 1.0) fail("param", "beta must be in [0,1]");
    const int n = net.node_count();
    std::vector<char> vacc(static_cast<std::size_t>(n), 0);
    for (int u : vaccinated) {
        if (u < 0 || u >= n) fail("param", "vaccinated node out of range");
        vacc[static_cast<std::size_t>(u)] = 1;
    }
    std::vector<int> open; // unvaccinated node ids, ascending
    for (int u = 0; u < n; ++u)
        if (!vacc[static_cast<std::size_t>(u)]) open.push_back(u);
    const int m = static_cast<int>(open.size());
    if (m == 0) fail("param", "all nodes vaccinated: no epidemic seed available");
    if (m > 12) fail("capacity", "exact distribution supports at most 12 unvaccinated nodes");

    std::vector<int> pos(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < m; ++i) pos[static_cast<std::size_t>(open[static_cast<std::size_t>(i)])] = i;
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
        for (int v : net.neighbors(open[static_cast<std::size_t>(i)])) {
            const int j = pos[static_cast<std::size_t>(v)];
            if (j >= 0) adj[static_cast<std::size_t>(i)] |= 1u << j;
        }
    }

    const std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1u);
    std::vector<int> edges_in(static_cast<std::size_t>(full) + 1, 0);
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int low = std::countr_zero(mask);
        const std::uint32_t rest = mask & (mask - 1);
        edges_in[mask] = edges_in[rest] + std::popcount(adj[static_cast<std::size_t>(low)] & rest);
    }

    std::vector<double> pw(static_cast<std::size_t>(edges_in[full]) + 1);
    pw[0] = 1.0;
    for (std::size_t e = 1; e < pw.size(); ++e) pw[e] = pw[e - 1] * (1.0 - params.beta);

    std::vector<double> pconn(static_cast<std::size_t>(full) + 1, 0.0);
    std::vector<double> result(static_cast<std::size_t>(full) + 1, 0.0);
    const double seed_weight = 1.0 / m;
    for (int s = 0; s < m; ++s) {
        const std::uint32_t sbit = 1u << s;
        for (std::uint32_t mask = sbit; mask <= full; ++mask) {
            if (!(mask & sbit)) continue;
            if ((mask & (mask - 1)) == 0) {
                pconn[mask] = 1.0;
            } else {
                double dead = 0.0;
                for (std::uint32_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
                    if (!(sub & sbit)) continue;
                    const int cross = edges_in[mask] - edges_in[sub] - edges_in[mask ^ sub];
                    dead += pconn[sub] * pw[static_cast<std::size_t>(cross)];
                }
                pconn[mask] = std::max(0.0, 1.0 - dead);
            }
            const int boundary = edges_in[full] - edges_in[mask] - edges_in[full ^ mask];
            result[mask] += seed_weight * pconn[mask] * pw[static_cast<std::size_t>(boundary)];
        }
    }

    std::map<std::vector<int>, double> dist;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        if (result[mask] <= 0.0) continue;
        std::vector<int> ids;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) ids.push_back(open[static_cast<std::size_t>(i)]);
        dist.emplace(std::move(ids), result[mask]);
    }
    return dist;
}

} // namespace episeason

#include <doctest.h>

#include <cmath>
#include <map>

#include "episeason/sir.hpp"
#include "helpers.hpp"

using namespace episeason;
using namespace testutil;

namespace {

std::vector<int> recovered_nodes(const EpidemicOutcome& out) {
    std::vector<int> ids;
    for (std::size_t u = 0; u < out.state.size(); ++u)
        if (out.state[u] == NodeState::Recovered) ids.push_back(static_cast<int>(u));
    return ids;
}

// Monte Carlo frequencies versus the exact distribution, every outcome
// within `sigmas` standard errors.
void check_mc_against_exact(const Network& net, const std::vector<int>& vacc, double beta,
                            int runs, Rng& rng, double sigmas = 4.0) {
    const auto exact = exact_outcome_distribution(net, vacc, SpreadParams{beta});
    std::map<std::vector<int>, int> counts;
    for (int i = 0; i < runs; ++i) {
        const auto out = run_sir(net, vacc, SpreadParams{beta}, rng);
        ++counts[recovered_nodes(out)];
    }
    double total_p = 0.0;
    for (const auto& [set, p] : exact) {
        total_p += p;
        const double freq = static_cast<double>(counts[set]) / runs;
        const double se = std::sqrt(p * (1.0 - p) / runs);
        CHECK(std::abs(freq - p) <= sigmas * se + 1e-12);
    }
    CHECK(total_p == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& [set, c] : counts) CHECK(exact.count(set) == 1); // no impossible outcome
}

} // namespace

TEST_CASE("beta=0 infects only the seed") {
    Rng rng(3);
    const auto net = make_net(8, ring_edges(8));
    for (int i = 0; i < 50; ++i) {
        const auto out = run_sir(net, {}, SpreadParams{0.0}, rng);
        CHECK(out.recovered_count == 1);
        CHECK(out.state[static_cast<std::size_t>(out.seed)] == NodeState::Recovered);
        CHECK(out.duration == 1);
        CHECK(prevalence(out, net) == doctest::Approx(1.0 / 8));
    }
}

TEST_CASE("beta=1 on a triangle recovers everyone in 2 steps") {
    Rng rng(4);
    const auto net = make_net(3, complete_edges(3));
    for (int i = 0; i < 20; ++i) {
        const auto out = run_sir(net, {}, SpreadParams{1.0}, rng);
        CHECK(out.recovered_count == 3);
        CHECK(out.duration == 2);
        CHECK(prevalence(out, net) == doctest::Approx(1.0));
    }
}

TEST_CASE("vaccination blocks the only route on a path") {
    Rng rng(5);
    const auto net = make_net(3, path_edges(3));
    const std::vector<int> vacc = {1};
    bool seed0 = false, seed2 = false;
    for (int i = 0; i < 100; ++i) {
        const auto out = run_sir(net, vacc, SpreadParams{1.0}, rng);
        CHECK(out.recovered_count == 1);
        CHECK(out.state[1] == NodeState::Vaccinated);
        CHECK((out.seed == 0 || out.seed == 2));
        seed0 |= out.seed == 0;
        seed2 |= out.seed == 2;
    }
    CHECK(seed0);
    CHECK(seed2);
}

TEST_CASE("all nodes vaccinated is an error") {
    Rng rng(6);
    const auto net = make_net(3, complete_edges(3));
    const std::vector<int> vacc = {0, 1, 2};
    CHECK_THROWS_AS(run_sir(net, vacc, SpreadParams{0.5}, rng), Error);
    CHECK_THROWS_AS(exact_outcome_distribution(net, vacc, SpreadParams{0.5}), Error);
}

TEST_CASE("per-step conservation and monotonicity") {
    Rng rng(7);
    const auto net = generate_ba(120, 3, rng);
    const std::vector<int> vacc = {0, 5, 9, 40, 77};
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<StepCounts> log;
        const auto out = run_sir(net, vacc, SpreadParams{0.25}, rng, &log);
        REQUIRE(!log.empty());
        for (std::size_t t = 0; t < log.size(); ++t) {
            CHECK(log[t].susceptible + log[t].infected + log[t].recovered == 120 - 5);
            if (t > 0) {
                CHECK(log[t].recovered >= log[t - 1].recovered);
                CHECK(log[t].susceptible <= log[t - 1].susceptible);
            }
        }
        CHECK(log.back().infected == 0);
        for (int u : vacc) CHECK(out.state[static_cast<std::size_t>(u)] == NodeState::Vaccinated);
        CHECK(out.state[static_cast<std::size_t>(out.seed)] == NodeState::Recovered);
    }
}

TEST_CASE("the recovered set is connected through infection") {
    Rng rng(8);
    const auto net = generate_ba(60, 2, rng);
    for (int trial = 0; trial < 40; ++trial) {
        const auto out = run_sir(net, {}, SpreadParams{0.4}, rng);
        const auto rec = recovered_nodes(out);
        REQUIRE(!rec.empty());
        std::vector<char> in_rec(static_cast<std::size_t>(net.node_count()), 0);
        for (int u : rec) in_rec[static_cast<std::size_t>(u)] = 1;
        std::vector<int> stack{out.seed};
        std::vector<char> seen(static_cast<std::size_t>(net.node_count()), 0);
        seen[static_cast<std::size_t>(out.seed)] = 1;
        std::size_t reached = 0;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            ++reached;
            for (int v : net.neighbors(u))
                if (in_rec[static_cast<std::size_t>(v)] && !seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    stack.push_back(v);
                }
        }
        CHECK(reached == rec.size());
    }
}

TEST_CASE("exact distribution hand values") {
    SUBCASE("beta=0 gives each unvaccinated singleton equal mass") {
        const auto net = make_net(4, path_edges(4));
        const std::vector<int> vacc = {2};
        const auto dist = exact_outcome_distribution(net, vacc, SpreadParams{0.0});
        CHECK(dist.size() == 3);
        for (const auto& [set, p] : dist) {
            CHECK(set.size() == 1);
            CHECK(p == doctest::Approx(1.0 / 3));
        }
    }
    SUBCASE("single edge at beta=0.5") {
        const auto net = make_net(2, EdgeList{{0, 1}});
        const auto dist = exact_outcome_distribution(net, {}, SpreadParams{0.5});
        CHECK(dist.at({0, 1}) == doctest::Approx(0.5));
        CHECK(dist.at({0}) == doctest::Approx(0.25));
        CHECK(dist.at({1}) == doctest::Approx(0.25));
    }
    SUBCASE("beta=1 on a connected graph is certain percolation") {
        const auto net = make_net(5, ring_edges(5));
        const auto dist = exact_outcome_distribution(net, {}, SpreadParams{1.0});
        CHECK(dist.size() == 1);
        CHECK(dist.at({0, 1, 2, 3, 4}) == doctest::Approx(1.0));
    }
    SUBCASE("probabilities sum to 1 on random graphs") {
        Rng rng(9);
        for (int trial = 0; trial < 10; ++trial) {
            const auto edges = random_gnp(7, 0.35, rng);
            const auto net = make_net(7, edges);
            const auto dist = exact_outcome_distribution(net, {}, SpreadParams{0.3});
            double total = 0.0;
            for (const auto& [set, p] : dist) total += p;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("capacity error above 12 unvaccinated nodes") {
        const auto net = make_net(13, path_edges(13));
        CHECK_THROWS_AS(exact_outcome_distribution(net, {}, SpreadParams{0.5}), Error);
    }
}

TEST_CASE("Monte Carlo frequencies match the exact oracle") {
    Rng rng(10);
    const auto path4 = make_net(4, path_edges(4));
    const auto star5 = make_net(6, star_edges(5));
    const auto tri = make_net(3, complete_edges(3));
    for (double beta : {0.0, 0.3, 1.0}) {
        check_mc_against_exact(path4, {1}, beta, 100000, rng);
        check_mc_against_exact(star5, {0}, beta, 100000, rng);
        check_mc_against_exact(tri, {}, beta, 100000, rng);
    }
}

TEST_CASE("mean prevalence is nondecreasing in beta") {
    Rng graph_rng(11);
    const auto net = generate_ba(150, 3, graph_rng);
    double prev_mean = -1.0, prev_se = 0.0;
    int stream = 0;
    for (double beta = 0.0; beta <= 1.0001; beta += 0.05) {
        std::vector<double> rs;
        Rng rng = make_rng(12, static_cast<std::uint64_t>(stream++));
        for (int i = 0; i < 1000; ++i)
            rs.push_back(prevalence(run_sir(net, {}, SpreadParams{std::min(beta, 1.0)}, rng), net));
        const double m = mean_of(rs);
        const double se = stderr_of(rs);
        if (prev_mean >= 0.0) CHECK(m >= prev_mean - 2.0 * (se + prev_se));
        prev_mean = m;
        prev_se = se;
    }
}

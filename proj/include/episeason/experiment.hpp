#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "episeason/error.hpp"
#include "episeason/graph.hpp"
#include "episeason/graph_stats.hpp"
#include "episeason/immunize.hpp"
#include "episeason/metrics.hpp"
#include "episeason/sir.hpp"

namespace episeason {

// Batch experiment parameters. The network source is either "ba:N,M[,SEED]"
// for a generated graph or a path (optionally "file:PATH") to an edge list;
// loaded files are reduced to their giant component before simulation.
struct ExperimentConfig {
    std::string network;
    Strategy strategy = Strategy::Uniform;
    double beta = 0.1;
    double v = 0.1;
    int seasons = 5;
    int replicas = 100;
    std::uint64_t seed = 1u;
    std::string out = "report.csv";
    int workers = 0;     // 0: EPISEASON_WORKERS env var, then hardware
    bool profiles = true; // per-season vaccinated-set structure columns
};

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.beta < 0.0 || cfg.beta > 1.0) fail("param", "beta must be in [0,1]");
    if (!(cfg.v >= 0.0 && cfg.v < 1.0)) fail("param", "v must be in [0,1)");
    if (cfg.seasons < 1) fail("param", "seasons must be >= 1");
    if (cfg.replicas < 1) fail("param", "replicas must be >= 1");
}

// Flat key=value config file; '#' starts a comment line.
inline void load_config(std::istream& in, ExperimentConfig& cfg) {
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("parse", "config line " + std::to_string(lineno) + " has no '='");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "network") cfg.network = value;
            else if (key == "strategy") cfg.strategy = parse_strategy(value);
            else if (key == "beta") cfg.beta = std::stod(value);
            else if (key == "v") cfg.v = std::stod(value);
            else if (key == "seasons") cfg.seasons = std::stoi(value);
            else if (key == "replicas") cfg.replicas = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "out") cfg.out = value;
            else if (key == "workers") cfg.workers = std::stoi(value);
            else if (key == "profiles") cfg.profiles = (value == "1" || value == "true" || value == "on");
            else fail("parse", "unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            fail("parse", "bad value for config key '" + key + "' on line " + std::to_string(lineno));
        } catch (const std::out_of_range&) {
            fail("parse", "bad value for config key '" + key + "' on line " + std::to_string(lineno));
        }
    }
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("io", "cannot open config file '" + path + "'");
    ExperimentConfig cfg;
    load_config(in, cfg);
    return cfg;
}

// Resolves the configured network source. Generated networks derive their
// seed from the master seed unless the source string pins one explicitly.
inline Network load_network(const ExperimentConfig& cfg) {
    const std::string& src = cfg.network;
    if (src.rfind("ba:", 0) == 0) {
        long long n = 0, m = 0;
        unsigned long long gseed = 0;
        bool has_seed = false;
        std::string body = src.substr(3);
        for (char& c : body)
            if (c == ',') c = ' ';
        std::istringstream iss(body);
        if (!(iss >> n >> m)) fail("parse", "bad generator spec '" + src + "' (want ba:N,M[,SEED])");
        has_seed = static_cast<bool>(iss >> gseed);
        std::string rest;
        if (iss >> rest) fail("parse", "bad generator spec '" + src + "'");
        Rng rng(has_seed ? static_cast<std::uint64_t>(gseed) : derive_seed(cfg.seed, 0x6261)); // "ba"
        return generate_ba(static_cast<int>(n), static_cast<int>(m), rng);
    }
    const std::string path = src.rfind("file:", 0) == 0 ? src.substr(5) : src;
    std::ifstream in(path);
    if (!in) fail("io", "cannot open edge list '" + path + "'");
    return giant_component(load_edge_list(in));
}

struct SeasonAggregate {
    int season = 0;
    double r_mean = 0.0;
    double r_stderr = 0.0;
    bool has_q1 = false, has_q2 = false;
    double q1 = 0.0, q2 = 0.0;
    bool has_profile = false;
    double vacc_mean_degree = 0.0, vacc_mean_kshell = 0.0, vacc_mean_distance = 0.0;
};

struct EnsembleReport {
    ExperimentConfig config;
    int node_count = 0;
    std::size_t edge_count = 0;
    std::vector<SeasonAggregate> seasons;
    std::vector<double> streak_mean;      // mean A_{S'}(S), S = 2..S'-1 (S' = seasons)
    std::vector<double> repeat_freq_mean; // mean F_{S'}(i), i = 1..S'-1
};

inline int resolve_workers(int configured, int jobs) {
    int w = configured;
    if (w <= 0) {
        if (const char* env = std::getenv("EPISEASON_WORKERS")) w = std::atoi(env);
    }
    if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
    if (w <= 0) w = 1;
    return std::min(w, std::max(jobs, 1));
}

namespace detail {

struct ReplicaMetrics {
    std::vector<double> r;
    std::vector<double> q1, q2;
    std::vector<SetStats> profile;
    bool has_profile = false;
    std::vector<double> streak, freq;
};

inline ReplicaMetrics run_replica(const Network& net, const ExperimentConfig& cfg,
                                  std::span<const int> shells, int replica) {
    const auto history =
        run_seasons(net, cfg.strategy, cfg.beta, cfg.v, cfg.seasons, derive_seed(cfg.seed, static_cast<std::uint64_t>(replica)));
    ReplicaMetrics out;
    out.r.reserve(history.seasons.size());
    for (const auto& rec : history.seasons) out.r.push_back(rec.prevalence);

    const int count = vaccination_count(cfg.v, net.node_count());
    if (count > 0) {
        if (cfg.seasons >= 2) out.q1 = recurrence(history, 1);
        if (cfg.seasons >= 3) {
            out.q2 = recurrence(history, 2);
            out.streak = continuous_streak(history, cfg.seasons);
            out.freq = repeat_frequency(history, cfg.seasons);
        }
    }
    if (cfg.profiles && count >= 2) {
        out.has_profile = true;
        out.profile.reserve(history.seasons.size());
        for (const auto& rec : history.seasons)
            out.profile.push_back(node_set_stats(net, rec.vaccinated.members, shells));
    }
    return out;
}

} // namespace detail

// Runs `replicas` independent replicas of run_seasons with derived
// per-replica seeds and aggregates per-season means and standard errors.
// The aggregation is a deterministic reduction over replica index, so the
// report does not depend on worker count or completion order.
inline EnsembleReport run_ensemble(const ExperimentConfig& cfg, const Network& net) {
    validate(cfg);
    const int replicas = cfg.replicas;
    const auto shells = k_shell(net);

    std::vector<detail::ReplicaMetrics> results(static_cast<std::size_t>(replicas));
    std::atomic<int> cursor{0};
    struct ReplicaError {
        std::string code, message;
    };
    std::vector<ReplicaError> errors(static_cast<std::size_t>(replicas));
    const int workers = resolve_workers(cfg.workers, replicas);
    const auto work = [&] {
        for (;;) {
            const int idx = cursor.fetch_add(1);
            if (idx >= replicas) return;
            try {
                results[static_cast<std::size_t>(idx)] = detail::run_replica(net, cfg, shells, idx);
            } catch (const Error& e) {
                errors[static_cast<std::size_t>(idx)] = {e.code(), e.what()};
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(idx)] = {"internal", e.what()};
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (int idx = 0; idx < replicas; ++idx) {
        const auto& err = errors[static_cast<std::size_t>(idx)];
        if (!err.message.empty())
            throw Error(err.code, "replica " + std::to_string(idx) + ": " + err.message);
    }

    EnsembleReport report;
    report.config = cfg;
    report.node_count = net.node_count();
    report.edge_count = net.edge_count();
    report.seasons.assign(static_cast<std::size_t>(cfg.seasons), {});

    const double invR = 1.0 / replicas;
    for (int s = 0; s < cfg.seasons; ++s) {
        auto& agg = report.seasons[static_cast<std::size_t>(s)];
        agg.season = s + 1;
        double sum = 0.0;
        for (const auto& rep : results) sum += rep.r[static_cast<std::size_t>(s)];
        agg.r_mean = sum * invR;
        if (replicas > 1) {
            double ss = 0.0;
            for (const auto& rep : results) {
                const double d = rep.r[static_cast<std::size_t>(s)] - agg.r_mean;
                ss += d * d;
            }
            agg.r_stderr = std::sqrt(ss / (replicas - 1)) / std::sqrt(static_cast<double>(replicas));
        }
        if (s >= 1 && !results.front().q1.empty()) {
            agg.has_q1 = true;
            for (const auto& rep : results) agg.q1 += rep.q1[static_cast<std::size_t>(s - 1)];
            agg.q1 *= invR;
        }
        if (s >= 2 && !results.front().q2.empty()) {
            agg.has_q2 = true;
            for (const auto& rep : results) agg.q2 += rep.q2[static_cast<std::size_t>(s - 2)];
            agg.q2 *= invR;
        }
        if (results.front().has_profile) {
            agg.has_profile = true;
            for (const auto& rep : results) {
                agg.vacc_mean_degree += rep.profile[static_cast<std::size_t>(s)].mean_degree;
                agg.vacc_mean_kshell += rep.profile[static_cast<std::size_t>(s)].mean_kshell;
                agg.vacc_mean_distance += rep.profile[static_cast<std::size_t>(s)].mean_distance;
            }
            agg.vacc_mean_degree *= invR;
            agg.vacc_mean_kshell *= invR;
            agg.vacc_mean_distance *= invR;
        }
    }
    if (!results.front().streak.empty()) {
        report.streak_mean.assign(results.front().streak.size(), 0.0);
        report.repeat_freq_mean.assign(results.front().freq.size(), 0.0);
        for (const auto& rep : results) {
            for (std::size_t i = 0; i < rep.streak.size(); ++i) report.streak_mean[i] += rep.streak[i];
            for (std::size_t i = 0; i < rep.freq.size(); ++i) report.repeat_freq_mean[i] += rep.freq[i];
        }
        for (double& x : report.streak_mean) x *= invR;
        for (double& x : report.repeat_freq_mean) x *= invR;
    }
    return report;
}

inline EnsembleReport run_ensemble(const ExperimentConfig& cfg) {
    if (cfg.network.empty()) fail("param", "no network source configured");
    return run_ensemble(cfg, load_network(cfg));
}

inline std::string format_g(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// CSV schema: season,strategy,beta,v,r_inf_mean,r_inf_stderr,q1,q2,
// vacc_mean_degree,vacc_mean_kshell,vacc_mean_distance. Metrics that are
// undefined for a season are left empty.
inline void emit_csv_header(std::ostream& out) {
    out << "season,strategy,beta,v,r_inf_mean,r_inf_stderr,q1,q2,"
           "vacc_mean_degree,vacc_mean_kshell,vacc_mean_distance\n";
}

inline void emit_csv_rows(const EnsembleReport& report, std::ostream& out) {
    for (const auto& s : report.seasons) {
        out << s.season << ',' << to_string(report.config.strategy) << ','
            << format_g(report.config.beta) << ',' << format_g(report.config.v) << ','
            << format_g(s.r_mean) << ',' << format_g(s.r_stderr) << ',';
        if (s.has_q1) out << format_g(s.q1);
        out << ',';
        if (s.has_q2) out << format_g(s.q2);
        out << ',';
        if (s.has_profile)
            out << format_g(s.vacc_mean_degree) << ',' << format_g(s.vacc_mean_kshell) << ','
                << format_g(s.vacc_mean_distance);
        else
            out << ",,";
        out << '\n';
    }
}

inline void emit_csv(const EnsembleReport& report, std::ostream& out) {
    emit_csv_header(out);
    emit_csv_rows(report, out);
}

inline void emit_csv(const EnsembleReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("io", "cannot open output file '" + path + "'");
    emit_csv(report, out);
    out.flush();
    if (!out) fail("io", "write failed for '" + path + "'");
}

struct ThresholdEstimate {
    double v_lo = 0.0;   // largest probed v that failed the criterion (0 if none)
    double v_hi = 0.0;   // smallest probed v that met the criterion
    bool saturated = false; // criterion unmet even at v = 0.99
    double value() const { return v_hi; }
};

// Bisection on v for the empirical immunization threshold: the criterion is
// ensemble-mean final-season prevalence below 0.005. Probe seeds derive from
// the master seed and the probe counter, so the estimate is deterministic.
inline ThresholdEstimate estimate_threshold(const Network& net, Strategy strategy, double beta,
                                            int seasons, int replicas, double tolerance,
                                            std::uint64_t master_seed, int workers = 0) {
    if (beta < 0.0 || beta > 1.0) fail("param", "beta must be in [0,1]");
    if (!(tolerance > 0.0)) fail("param", "tolerance must be positive");
    if (seasons < 1 || replicas < 1) fail("param", "seasons and replicas must be >= 1");

    int probe_counter = 0;
    const auto mean_final_r = [&](double v) {
        const std::uint64_t probe_seed = derive_seed(master_seed, 0x70726f00ull + static_cast<std::uint64_t>(probe_counter++));
        ExperimentConfig cfg;
        cfg.strategy = strategy;
        cfg.beta = beta;
        cfg.v = v;
        cfg.seasons = seasons;
        cfg.replicas = replicas;
        cfg.seed = probe_seed;
        cfg.workers = workers;
        cfg.profiles = false;
        const auto report = run_ensemble(cfg, net);
        return report.seasons.back().r_mean;
    };
    const auto meets = [&](double v) { return mean_final_r(v) < 0.005; };

    if (meets(0.0)) return {0.0, 0.0, false};
    // keep the top probe below the point where round(vN) would vaccinate
    // everyone and leave no seed
    const int n = net.node_count();
    const double upper = std::min(0.99, (n - 0.5) / n - 1e-9);
    if (!meets(upper)) return {upper, upper, true};

    double lo = 0.0, hi = upper;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (meets(mid)) hi = mid;
        else lo = mid;
    }
    return {lo, hi, false};
}

} // namespace episeason

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "episeason/error.hpp"
#include "episeason/experiment.hpp"
#include "episeason/meanfield.hpp"

namespace episeason {

// Named experiment presets at desk scale (generated BA networks) or full
// scale (a real edge-list file). All randomness derives from `seed`, so a
// preset rerun with the same options writes byte-identical files.
struct PresetOptions {
    std::string out = "preset.csv";
    std::string scale = "desk"; // "desk" | "full"
    std::string network;        // edge-list path, required for full scale
    std::uint64_t seed = 1u;
    int replicas = 0; // 0: preset default
    int workers = 0;
};

namespace detail {

inline std::string with_suffix(const std::string& path, const std::string& suffix) {
    const std::string ext = ".csv";
    if (path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
        return path.substr(0, path.size() - ext.size()) + suffix;
    return path + suffix;
}

inline Network preset_network(const PresetOptions& opt, int ba_n, int ba_m, std::uint64_t stream) {
    if (opt.scale == "desk") {
        Rng rng(derive_seed(opt.seed, stream));
        return generate_ba(ba_n, ba_m, rng);
    }
    if (opt.scale != "full") fail("param", "scale must be 'desk' or 'full'");
    if (opt.network.empty()) fail("param", "full scale needs --network <edge list>");
    std::ifstream in(opt.network);
    if (!in) fail("io", "cannot open edge list '" + opt.network + "'");
    return giant_component(load_edge_list(in));
}

} // namespace detail

// Theory-versus-simulation series: dynamical immunization on a small BA
// network, plus the degree-class mean-field prediction for the same
// parameters. Writes <out> and <out with .theory.csv> (season,r_inf_theory).
inline void preset_fig2(const PresetOptions& opt) {
    const auto net = detail::preset_network(opt, 100, 2, 0x66326e); // BA with <k> near 3.94
    ExperimentConfig cfg;
    cfg.network = "(preset fig2)";
    cfg.strategy = Strategy::Dynamical;
    cfg.beta = 0.1;
    cfg.v = 0.1;
    cfg.seasons = 5;
    cfg.replicas = opt.replicas > 0 ? opt.replicas : 100;
    cfg.seed = opt.seed;
    cfg.workers = opt.workers;
    cfg.out = opt.out;
    emit_csv(run_ensemble(cfg, net), opt.out);

    const auto dist = degree_stats(net).distribution;
    const double i0 = 1.0 / net.node_count();
    const auto series = run_meanfield_seasons(dist, cfg.beta, cfg.v, i0, cfg.seasons);
    const std::string theory_path = detail::with_suffix(opt.out, ".theory.csv");
    std::ofstream out(theory_path, std::ios::binary);
    if (!out) fail("io", "cannot open output file '" + theory_path + "'");
    out << "season,r_inf_theory\n";
    for (std::size_t s = 0; s < series.r_inf.size(); ++s)
        out << (s + 1) << ',' << format_g(series.r_inf[s]) << '\n';
}

// Strategy comparison: all four strategies on one network, stacked into a
// single CSV distinguished by the strategy column.
inline void preset_fig3(const PresetOptions& opt) {
    const auto net = detail::preset_network(opt, 1000, 10, 0x663362);
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) fail("io", "cannot open output file '" + opt.out + "'");
    emit_csv_header(out);
    for (Strategy strategy : {Strategy::Uniform, Strategy::Targeted, Strategy::Acquaintance,
                              Strategy::Dynamical}) {
        ExperimentConfig cfg;
        cfg.network = "(preset fig3)";
        cfg.strategy = strategy;
        cfg.beta = 0.1;
        cfg.v = 0.1;
        cfg.seasons = 10;
        cfg.replicas = opt.replicas > 0 ? opt.replicas : 100;
        cfg.seed = derive_seed(opt.seed, 0x7374ull + static_cast<std::uint64_t>(strategy));
        cfg.workers = opt.workers;
        cfg.profiles = opt.scale == "desk"; // pairwise distances are costly at full scale
        emit_csv_rows(run_ensemble(cfg, net), out);
    }
    if (!out) fail("io", "write failed for '" + opt.out + "'");
}

// Recurrence and streak metrics of the dynamical strategy over ten seasons.
// Writes <out> plus <out with .streaks.csv> holding the ensemble means of
// A_10(S) and F_10(i) as metric,index,value rows.
inline void preset_fig56(const PresetOptions& opt) {
    const auto net = detail::preset_network(opt, 1000, 10, 0x663362);
    ExperimentConfig cfg;
    cfg.network = "(preset fig56)";
    cfg.strategy = Strategy::Dynamical;
    cfg.beta = 0.1;
    cfg.v = 0.1;
    cfg.seasons = 10;
    cfg.replicas = opt.replicas > 0 ? opt.replicas : 100;
    cfg.seed = opt.seed;
    cfg.workers = opt.workers;
    cfg.profiles = opt.scale == "desk";
    const auto report = run_ensemble(cfg, net);
    emit_csv(report, opt.out);

    const std::string aux_path = detail::with_suffix(opt.out, ".streaks.csv");
    std::ofstream out(aux_path, std::ios::binary);
    if (!out) fail("io", "cannot open output file '" + aux_path + "'");
    out << "metric,index,value\n";
    for (std::size_t i = 0; i < report.streak_mean.size(); ++i)
        out << "A," << (i + 2) << ',' << format_g(report.streak_mean[i]) << '\n';
    for (std::size_t i = 0; i < report.repeat_freq_mean.size(); ++i)
        out << "F," << (i + 1) << ',' << format_g(report.repeat_freq_mean[i]) << '\n';
}

// Empirical immunization thresholds across transmission rates, uniform
// versus dynamical. Columns: beta,strategy,v_lo,v_hi,v_c,saturated.
inline void preset_fig7(const PresetOptions& opt) {
    const auto net = detail::preset_network(opt, 1000, 10, 0x663762);
    const std::vector<double> betas =
        opt.scale == "desk" ? std::vector<double>{0.1, 0.2, 0.4} : std::vector<double>{0.02, 0.05, 0.1};
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) fail("io", "cannot open output file '" + opt.out + "'");
    out << "beta,strategy,v_lo,v_hi,v_c,saturated\n";
    int sweep = 0;
    for (double beta : betas) {
        for (Strategy strategy : {Strategy::Uniform, Strategy::Dynamical}) {
            const auto est = estimate_threshold(net, strategy, beta, 5,
                                                opt.replicas > 0 ? opt.replicas : 50, 0.02,
                                                derive_seed(opt.seed, 0x737700ull + static_cast<std::uint64_t>(sweep++)),
                                                opt.workers);
            out << format_g(beta) << ',' << to_string(strategy) << ',' << format_g(est.v_lo) << ','
                << format_g(est.v_hi) << ',' << format_g(est.value()) << ',' << (est.saturated ? 1 : 0)
                << '\n';
        }
    }
    if (!out) fail("io", "write failed for '" + opt.out + "'");
}

} // namespace episeason

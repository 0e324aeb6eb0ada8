// Batch driver for seasonal-immunization experiments. Subcommands:
//   run        one ensemble experiment from a config file and/or flags
//   threshold  bisection estimate of the empirical immunization threshold
//   gen-ba     write a Barabasi-Albert edge list
//   fig2/fig3/fig56/fig7   named experiment presets
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "episeason/experiment.hpp"
#include "episeason/presets.hpp"

namespace {

void print_error(const std::string& code, const std::string& message) {
    nlohmann::json j{{"code", code}, {"message", message}};
    std::cerr << "error: " << j.dump() << "\n";
}

struct RunFlags {
    std::string config_path;
    std::string network;
    std::string strategy;
    double beta = -1.0;
    double v = -1.0;
    int seasons = 0;
    int replicas = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    int workers = 0;
};

episeason::ExperimentConfig resolve_config(const RunFlags& f) {
    episeason::ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = episeason::load_config_file(f.config_path);
    if (!f.network.empty()) cfg.network = f.network;
    if (!f.strategy.empty()) cfg.strategy = episeason::parse_strategy(f.strategy);
    if (f.beta >= 0.0) cfg.beta = f.beta;
    if (f.v >= 0.0) cfg.v = f.v;
    if (f.seasons > 0) cfg.seasons = f.seasons;
    if (f.replicas > 0) cfg.replicas = f.replicas;
    if (f.seed_set) cfg.seed = f.seed;
    if (!f.out.empty()) cfg.out = f.out;
    if (f.workers > 0) cfg.workers = f.workers;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seasonal-epidemic immunization experiments"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "Run one ensemble experiment and write its CSV report");
    run->add_option("--config", run_flags.config_path, "key=value config file");
    run->add_option("--network", run_flags.network, "edge list path or ba:N,M[,SEED]");
    run->add_option("--strategy", run_flags.strategy, "uniform|targeted|acquaintance|dynamical");
    run->add_option("--beta", run_flags.beta, "transmission probability");
    run->add_option("--v", run_flags.v, "vaccinated proportion");
    run->add_option("--seasons", run_flags.seasons, "number of epidemic seasons");
    run->add_option("--replicas", run_flags.replicas, "ensemble size");
    run->add_option("--seed", run_flags.seed, "master seed")->each([&](const std::string&) {
        run_flags.seed_set = true;
    });
    run->add_option("--out", run_flags.out, "output CSV path");
    run->add_option("--workers", run_flags.workers, "worker threads (default: EPISEASON_WORKERS env, then hardware)");

    RunFlags thr_flags;
    double thr_tol = 0.01;
    auto* thr = app.add_subcommand("threshold", "Estimate the immunization threshold by bisection");
    thr->add_option("--config", thr_flags.config_path, "key=value config file");
    thr->add_option("--network", thr_flags.network, "edge list path or ba:N,M[,SEED]");
    thr->add_option("--strategy", thr_flags.strategy, "uniform|targeted|acquaintance|dynamical");
    thr->add_option("--beta", thr_flags.beta, "transmission probability")->required();
    thr->add_option("--tol", thr_tol, "bracket width tolerance");
    thr->add_option("--seasons", thr_flags.seasons, "seasons per probe (default 5)");
    thr->add_option("--replicas", thr_flags.replicas, "replicas per probe (default 50)");
    thr->add_option("--seed", thr_flags.seed, "master seed")->each([&](const std::string&) {
        thr_flags.seed_set = true;
    });
    thr->add_option("--workers", thr_flags.workers, "worker threads");

    long long ba_n = 0, ba_m = 0;
    std::uint64_t ba_seed = 1;
    std::string ba_out;
    auto* gen = app.add_subcommand("gen-ba", "Generate a Barabasi-Albert network edge list");
    gen->add_option("--n", ba_n, "node count")->required();
    gen->add_option("--m", ba_m, "edges per new node")->required();
    gen->add_option("--seed", ba_seed, "generator seed");
    gen->add_option("--out", ba_out, "output edge list path")->required();

    episeason::PresetOptions preset;
    std::string preset_name;
    for (const char* name : {"fig2", "fig3", "fig56", "fig7"}) {
        auto* sub = app.add_subcommand(name, std::string("Preset experiment ") + name);
        sub->add_option("--out", preset.out, "output CSV path (auxiliary files derive from it)");
        sub->add_option("--scale", preset.scale, "desk|full");
        sub->add_option("--network", preset.network, "edge list for full scale");
        sub->add_option("--seed", preset.seed, "master seed");
        sub->add_option("--replicas", preset.replicas, "override ensemble size");
        sub->add_option("--workers", preset.workers, "worker threads");
        sub->callback([&preset_name, name] { preset_name = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0) print_error("cli", e.what());
        return app.exit(e);
    }

    try {
        if (run->parsed()) {
            auto cfg = resolve_config(run_flags);
            if (cfg.network.empty()) episeason::fail("param", "no network source configured");
            const auto report = episeason::run_ensemble(cfg);
            episeason::emit_csv(report, cfg.out);
            std::cout << "wrote " << cfg.out << " (" << report.node_count << " nodes, "
                      << report.config.replicas << " replicas)\n";
        } else if (thr->parsed()) {
            auto cfg = resolve_config(thr_flags);
            if (cfg.network.empty()) episeason::fail("param", "no network source configured");
            if (thr_flags.seasons <= 0) cfg.seasons = 5;
            if (thr_flags.replicas <= 0) cfg.replicas = 50;
            const auto net = episeason::load_network(cfg);
            const auto est = episeason::estimate_threshold(net, cfg.strategy, cfg.beta, cfg.seasons,
                                                           cfg.replicas, thr_tol, cfg.seed, cfg.workers);
            std::cout << "v_c=" << episeason::format_g(est.value())
                      << " lo=" << episeason::format_g(est.v_lo)
                      << " hi=" << episeason::format_g(est.v_hi)
                      << " saturated=" << (est.saturated ? 1 : 0) << "\n";
        } else if (gen->parsed()) {
            episeason::Rng rng(ba_seed);
            const auto net = episeason::generate_ba(static_cast<int>(ba_n), static_cast<int>(ba_m), rng);
            std::ofstream out(ba_out, std::ios::binary);
            if (!out) episeason::fail("io", "cannot open output file '" + ba_out + "'");
            episeason::save_edge_list(net, out);
            std::cout << "wrote " << ba_out << " (" << net.node_count() << " nodes, "
                      << net.edge_count() << " edges)\n";
        } else if (preset_name == "fig2") {
            episeason::preset_fig2(preset);
        } else if (preset_name == "fig3") {
            episeason::preset_fig3(preset);
        } else if (preset_name == "fig56") {
            episeason::preset_fig56(preset);
        } else if (preset_name == "fig7") {
            episeason::preset_fig7(preset);
        }
    } catch (const episeason::Error& e) {
        print_error(e.code(), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 2;
    }
    return 0;
}

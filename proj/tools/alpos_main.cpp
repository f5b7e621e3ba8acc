#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "alpos/config_io.hpp"
#include "alpos/dataset.hpp"
#include "alpos/report.hpp"
#include "alpos/rng.hpp"
#include "alpos/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace alpos;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> realizations;
    std::optional<int> workers;
    std::optional<std::string> strategies;
};

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig cfg = opts.config_path.empty()
                               ? ExperimentConfig{}
                               : parse_config(opts.config_path);
    if (opts.seed) cfg.base_seed = *opts.seed;
    if (opts.realizations) cfg.n_realizations = *opts.realizations;
    if (opts.workers) cfg.workers = *opts.workers;
    if (opts.strategies) {
        cfg.strategies.clear();
        std::istringstream in(*opts.strategies);
        std::string item;
        while (std::getline(in, item, ','))
            if (!item.empty()) cfg.strategies.push_back(strategy_from_name(item));
    }
    cfg.validate();
    return cfg;
}

void print_progress(const RealizationResult& rr) {
    std::cerr << "bs=" << rr.bs_count << " strategy=" << strategy_name(rr.strategy)
              << " realization=" << rr.realization << " status=" << rr.status;
    for (const TestSetMetrics& m : rr.metrics)
        std::cerr << " " << m.test_set << " q90 " << m.q90_initial_m << " -> "
                  << m.q90_after_m << " (gain " << m.gain << ")";
    std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active-learning data selection for path-gain fingerprint "
                 "positioning"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string out_path = "out";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "config file (ini)");
        cmd->add_option("--out", out_path, "output directory");
        cmd->add_option("--seed", opts.seed, "override base_seed");
        cmd->add_option("--realizations", opts.realizations,
                        "override n_realizations");
        cmd->add_option("--workers", opts.workers, "parallel workers");
        cmd->add_option("--strategies", opts.strategies,
                        "csv list: random,genie,practical,rand60,rand100");
    };

    auto* gen_pool = app.add_subcommand(
        "gen-pool", "generate the position/path-gain pool dataset file");
    std::string pool_file = "pool.txt";
    add_common(gen_pool);
    gen_pool->add_option("--file", pool_file, "output dataset file");

    auto* run = app.add_subcommand("run", "run the full experiment sweep");
    add_common(run);

    auto* report = app.add_subcommand(
        "report", "recompute summary.csv and summary.svg from results.csv");
    std::string results_path = "out/results.csv";
    add_common(report);
    report->add_option("--results", results_path, "results.csv path");

    auto* verify =
        app.add_subcommand("verify", "check manifest checksums of a run");
    std::string manifest_path = "out/manifest.txt";
    verify->add_option("--manifest", manifest_path, "manifest.txt path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen_pool->parsed()) {
            const ExperimentConfig cfg = load_config(opts);
            const Scene scene = build_scene(cfg.scene);
            const std::uint64_t seed =
                derive_seed(cfg.base_seed, 0);  // realization 0 pool stream
            Dataset pool = generate_pool(scene, cfg.pool_size,
                                         derive_seed(seed, 1));
            write_dataset(pool, scene, cfg.base_seed, pool_file);
            std::cout << "wrote " << pool.size() << " samples to " << pool_file
                      << "\n";
        } else if (run->parsed()) {
            const ExperimentConfig cfg = load_config(opts);
            const auto results = run_experiment(cfg, print_progress);
            const SummaryTable summary = summarize(results);
            write_results(results, summary, cfg, out_path);
            std::cout << render_summary_text(summary);
            std::cout << "results written to " << out_path << "\n";
        } else if (report->parsed()) {
            const ExperimentConfig cfg = load_config(opts);
            const auto results = read_results_csv(results_path);
            const SummaryTable summary = summarize(results);
            write_results(results, summary, cfg, out_path);
            std::cout << render_summary_text(summary);
        } else if (verify->parsed()) {
            const auto mismatched = verify_manifest(manifest_path);
            if (mismatched.empty()) {
                std::cout << "all checksums match\n";
            } else {
                for (const auto& name : mismatched)
                    std::cerr << "checksum mismatch: " << name << "\n";
                return kExitRuntime;
            }
        }
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

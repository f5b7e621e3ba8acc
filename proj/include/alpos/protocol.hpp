#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alpos/dataset.hpp"
#include "alpos/metrics.hpp"
#include "alpos/normalizer.hpp"
#include "alpos/selection.hpp"
#include "alpos/training.hpp"

namespace alpos {

// Strategies of the experiment sweep; Rand60/Rand100 are random selection
// with the selection fraction overridden to 60% / 100%.
enum class Strategy { Random, Genie, Practical, Rand60, Rand100 };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct ExperimentConfig {
    int n = 1700;                // |D1| and candidate count
    double x_percent = 10.0;
    int pool_size = 80000;
    std::vector<int> bs_counts = {18, 12, 8, 4};
    std::vector<Strategy> strategies = {Strategy::Random, Strategy::Genie,
                                        Strategy::Practical};
    int n_realizations = 5;
    std::uint64_t base_seed = 1;
    int workers = 1;
    SceneConfig scene;
    TrainConfig train;

    void validate() const;
};

// Spatially spread picks from the 3x6 grid for the reduced BS counts.
std::vector<int> default_bs_subset(int bs_count);

struct TestSetMetrics {
    std::string test_set;  // "test1" or "test2"
    double q90_initial_m = 0.0;
    double q90_after_m = 0.0;
    double gain = 0.0;
};

struct RealizationResult {
    int realization = 0;
    std::uint64_t seed = 0;
    int bs_count = 0;
    Strategy strategy = Strategy::Random;
    int k_selected = 0;
    std::vector<int> selected_indices;
    std::vector<TestSetMetrics> metrics;
    bool valid = true;
    std::string status = "ok";  // "ok" or "diverged"
};

struct SummaryRow {
    int bs_count = 0;
    Strategy strategy = Strategy::Random;
    std::string test_set;
    double mean_gain = 0.0;
    double mean_q90_initial_m = 0.0;
    double mean_q90_after_m = 0.0;
    int n_valid = 0;
};

using SummaryTable = std::vector<SummaryRow>;

// Shared per-(realization, bs_count) state: the paired-seed contract makes
// every strategy observe identical D1, candidates and initial NN1A.
struct RealizationContext {
    Scene scene;
    Dataset pool;  // bs-subsampled
    PoolPartition partition;
    Normalizer norm_a;
    Model nn1a;
    std::optional<Normalizer> norm_b;
    std::optional<Model> nn1b;
    std::vector<double> pool_errors_initial;  // NN1A error per pool sample
    std::uint64_t seed = 0;
};

RealizationContext prepare_realization(const ExperimentConfig& cfg,
                                       int bs_count, int realization_index,
                                       bool need_nn1b);

// Steps 2-4 of the protocol for one strategy on a prepared context.
RealizationResult run_strategy(const ExperimentConfig& cfg,
                               const RealizationContext& ctx,
                               Strategy strategy, int realization_index);

// Convenience wrapper: prepare + run a single (strategy, realization).
RealizationResult run_realization(const ExperimentConfig& cfg, int bs_count,
                                  Strategy strategy, int realization_index);

// Full sweep over bs_counts x strategies x realizations.
std::vector<RealizationResult> run_experiment(
    const ExperimentConfig& cfg,
    void (*progress)(const RealizationResult&) = nullptr);

SummaryTable summarize(const std::vector<RealizationResult>& results);

}  // namespace alpos

#include "alpos/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include "alpos/rng.hpp"

namespace alpos {
namespace {

// Sub-stream tags for seed derivation.
enum SeedTag : std::uint64_t {
    kPoolSeed = 1,
    kPartitionSeed = 2,
    kNn1aInit = 3,
    kNn1aShuffle = 4,
    kNn1bInit = 5,
    kNn1bShuffle = 6,
    kSelectBase = 100,
    kFineTuneBase = 200,
};

std::uint64_t realization_seed(const ExperimentConfig& cfg, int realization) {
    return derive_seed(cfg.base_seed, static_cast<std::uint64_t>(realization));
}

double strategy_x_percent(const ExperimentConfig& cfg, Strategy s) {
    switch (s) {
        case Strategy::Rand60: return 60.0;
        case Strategy::Rand100: return 100.0;
        default: return cfg.x_percent;
    }
}

}  // namespace

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Random: return "random";
        case Strategy::Genie: return "genie";
        case Strategy::Practical: return "practical";
        case Strategy::Rand60: return "rand60";
        case Strategy::Rand100: return "rand100";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "random") return Strategy::Random;
    if (name == "genie") return Strategy::Genie;
    if (name == "practical") return Strategy::Practical;
    if (name == "rand60") return Strategy::Rand60;
    if (name == "rand100") return Strategy::Rand100;
    throw InvalidConfig("unknown strategy: " + name);
}

void ExperimentConfig::validate() const {
    scene.validate();
    train.validate();
    if (n < 1) throw InvalidConfig("experiment.n must be >= 1");
    if (!(x_percent >= 0.0 && x_percent <= 100.0))
        throw InvalidConfig("experiment.x_percent must lie in [0,100]");
    if (2 * static_cast<std::int64_t>(n) > pool_size)
        throw InvalidConfig("experiment.pool_size must be >= 2n");
    if (n_realizations < 1)
        throw InvalidConfig("experiment.n_realizations must be >= 1");
    if (workers < 1) throw InvalidConfig("experiment.workers must be >= 1");
    if (bs_counts.empty()) throw InvalidConfig("experiment.bs_counts empty");
    for (int c : bs_counts)
        if (c < 1 || c > 18)
            throw InvalidConfig("experiment.bs_counts entries must be in 1..18");
    if (strategies.empty()) throw InvalidConfig("experiment.strategies empty");
}

std::vector<int> default_bs_subset(int bs_count) {
    // Row-major 3x6 grid (3 across the width, 6 along the length).
    switch (bs_count) {
        case 18: return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17};
        case 12: return {0, 2, 3, 5, 6, 8, 9, 11, 12, 14, 15, 17};
        case 8: return {0, 2, 6, 8, 9, 11, 15, 17};
        case 4: return {0, 2, 15, 17};
        default: break;
    }
    // Fallback: evenly strided picks over the full grid.
    std::vector<int> keep;
    for (int i = 0; i < bs_count; ++i)
        keep.push_back(static_cast<int>(std::llround(i * 17.0 /
                                                     std::max(1, bs_count - 1))));
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    return keep;
}

RealizationContext prepare_realization(const ExperimentConfig& cfg,
                                       int bs_count, int realization_index,
                                       bool need_nn1b) {
    cfg.validate();
    const std::uint64_t rseed = realization_seed(cfg, realization_index);

    RealizationContext ctx;
    ctx.seed = rseed;
    ctx.scene = build_scene(cfg.scene);
    Dataset full_pool = generate_pool(ctx.scene, cfg.pool_size,
                                      derive_seed(rseed, kPoolSeed));
    ctx.pool = bs_count == ctx.scene.n_bs()
                   ? std::move(full_pool)
                   : subsample_bs(full_pool, default_bs_subset(bs_count));
    ctx.partition =
        partition_pool(ctx.pool, cfg.n, derive_seed(rseed, kPartitionSeed));

    ctx.norm_a = fit_normalizer(ctx.partition.d1, ctx.scene);
    ModelArch arch_a{ctx.pool.n_features(), 120, 7, 2};
    Model nn1a = init_model(
        arch_a, derive_seed(rseed, kNn1aInit, static_cast<std::uint64_t>(bs_count)));
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(rseed, kNn1aShuffle, static_cast<std::uint64_t>(bs_count));
    const Eigen::MatrixXd d1_features =
        ctx.norm_a.normalize_features(feature_matrix(ctx.partition.d1));
    const Eigen::MatrixXd d1_positions =
        ctx.norm_a.normalize_positions(position_matrix(ctx.partition.d1));
    ctx.nn1a = train(std::move(nn1a), d1_features, d1_positions, tc).model;

    if (need_nn1b) {
        ctx.norm_b = fit_normalizer(ctx.partition.d1, ctx.scene);
        ModelArch arch_b{2, 120, 7, ctx.pool.n_features()};
        Model nn1b = init_model(
            arch_b,
            derive_seed(rseed, kNn1bInit, static_cast<std::uint64_t>(bs_count)));
        TrainConfig tb = cfg.train;
        tb.seed =
            derive_seed(rseed, kNn1bShuffle, static_cast<std::uint64_t>(bs_count));
        // Inverted pairs: position in, signals out.
        ctx.nn1b = train(std::move(nn1b),
                         ctx.norm_b->normalize_positions(
                             position_matrix(ctx.partition.d1)),
                         ctx.norm_b->normalize_features(
                             feature_matrix(ctx.partition.d1)),
                         tb)
                       .model;
    }

    ctx.pool_errors_initial = positioning_errors(ctx.nn1a, ctx.norm_a, ctx.pool);
    return ctx;
}

RealizationResult run_strategy(const ExperimentConfig& cfg,
                               const RealizationContext& ctx,
                               Strategy strategy, int realization_index) {
    const std::uint64_t rseed = ctx.seed;
    const int bs_count = ctx.pool.n_features();
    const int k = selection_count(strategy_x_percent(cfg, strategy), cfg.n);

    RealizationResult rr;
    rr.realization = realization_index;
    rr.seed = rseed;
    rr.bs_count = bs_count;
    rr.strategy = strategy;
    rr.k_selected = k;

    try {
        SelectionResult sel;
        switch (strategy) {
            case Strategy::Random:
            case Strategy::Rand60:
            case Strategy::Rand100:
                sel = select_random(
                    cfg.n, k,
                    derive_seed(rseed, kSelectBase + static_cast<int>(strategy),
                                static_cast<std::uint64_t>(bs_count)));
                break;
            case Strategy::Genie:
                sel = select_genie(ctx.nn1a, ctx.norm_a, ctx.partition.candidates,
                                   k);
                break;
            case Strategy::Practical: {
                std::vector<Vec2> positions;
                positions.reserve(ctx.partition.candidates.size());
                for (const Sample& s : ctx.partition.candidates.samples)
                    positions.push_back(s.position);
                sel = select_practical(ctx.nn1a, ctx.norm_a, *ctx.nn1b,
                                       *ctx.norm_b, positions, k);
                break;
            }
        }
        rr.selected_indices = sel.selected_indices;

        std::vector<bool> is_selected(cfg.n, false);
        for (int i : sel.selected_indices) is_selected[i] = true;

        // D2 = D1 plus the selected candidates.
        std::vector<int> d2_pool_indices = ctx.partition.d1_indices;
        std::vector<int> test1_local;  // candidate-local indices
        for (int i = 0; i < cfg.n; ++i) {
            if (is_selected[i])
                d2_pool_indices.push_back(ctx.partition.candidate_indices[i]);
            else
                test1_local.push_back(i);
        }
        Dataset d2 = take_samples(ctx.pool, d2_pool_indices);

        TrainConfig tc = cfg.train;
        tc.seed = derive_seed(rseed, kFineTuneBase + static_cast<int>(strategy),
                              static_cast<std::uint64_t>(bs_count));
        Model nn2a = train(ctx.nn1a,
                           ctx.norm_a.normalize_features(feature_matrix(d2)),
                           ctx.norm_a.normalize_positions(position_matrix(d2)),
                           tc, cfg.train.fine_tune_lr, cfg.train.fine_tune_epochs)
                         .model;

        // test1: non-selected candidates. With X = 100 every candidate is
        // selected; fall back to the full candidate set (then part of D2).
        std::vector<int> test1_pool_indices;
        if (test1_local.empty()) {
            test1_pool_indices = ctx.partition.candidate_indices;
        } else {
            for (int i : test1_local)
                test1_pool_indices.push_back(ctx.partition.candidate_indices[i]);
        }
        // test2: pool minus D2 = rest plus non-selected candidates.
        std::vector<int> test2_pool_indices = ctx.partition.rest_indices;
        for (int i : test1_local)
            test2_pool_indices.push_back(ctx.partition.candidate_indices[i]);

        // The initial reference is the performance level of the shared
        // initial model, measured before any selection: on all candidates
        // for test1 and on pool minus D1 for test2. Keeping it selection
        // independent matches the single initial-training curve the results
        // are compared against, and makes it identical across strategies.
        auto metrics_for = [&](const std::string& name,
                               const std::vector<int>& initial_pool_indices,
                               const std::vector<int>& after_pool_indices) {
            std::vector<double> initial_err, after_err;
            initial_err.reserve(initial_pool_indices.size());
            for (int i : initial_pool_indices)
                initial_err.push_back(ctx.pool_errors_initial[i]);
            after_err = positioning_errors(
                nn2a, ctx.norm_a, take_samples(ctx.pool, after_pool_indices));
            TestSetMetrics m;
            m.test_set = name;
            m.q90_initial_m = q_quantile(initial_err, 0.9);
            m.q90_after_m = q_quantile(after_err, 0.9);
            m.gain = gain(m.q90_initial_m, m.q90_after_m);
            return m;
        };
        std::vector<int> pool_minus_d1 = ctx.partition.candidate_indices;
        pool_minus_d1.insert(pool_minus_d1.end(),
                             ctx.partition.rest_indices.begin(),
                             ctx.partition.rest_indices.end());
        rr.metrics.push_back(metrics_for(
            "test1", ctx.partition.candidate_indices, test1_pool_indices));
        rr.metrics.push_back(
            metrics_for("test2", pool_minus_d1, test2_pool_indices));
    } catch (const TrainingDiverged& e) {
        rr.valid = false;
        rr.status = std::string("diverged: ") + e.what();
    }
    return rr;
}

RealizationResult run_realization(const ExperimentConfig& cfg, int bs_count,
                                  Strategy strategy, int realization_index) {
    RealizationContext ctx = prepare_realization(
        cfg, bs_count, realization_index, strategy == Strategy::Practical);
    return run_strategy(cfg, ctx, strategy, realization_index);
}

std::vector<RealizationResult> run_experiment(
    const ExperimentConfig& cfg, void (*progress)(const RealizationResult&)) {
    cfg.validate();
    const bool need_nn1b =
        std::count(cfg.strategies.begin(), cfg.strategies.end(),
                   Strategy::Practical) > 0;

    struct Job {
        int bs_count;
        int realization;
    };
    std::vector<Job> jobs;
    for (int bs : cfg.bs_counts)
        for (int r = 0; r < cfg.n_realizations; ++r) jobs.push_back({bs, r});

    std::vector<std::vector<RealizationResult>> slots(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) break;
            RealizationContext ctx = prepare_realization(
                cfg, jobs[j].bs_count, jobs[j].realization, need_nn1b);
            for (Strategy s : cfg.strategies)
                slots[j].push_back(run_strategy(cfg, ctx, s, jobs[j].realization));
        }
    };
    const int n_workers =
        std::min<int>(cfg.workers, static_cast<int>(jobs.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < n_workers; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    std::vector<RealizationResult> results;
    for (auto& slot : slots)
        for (auto& rr : slot) {
            if (progress) progress(rr);
            results.push_back(std::move(rr));
        }
    // Deterministic order for aggregation and reporting.
    std::stable_sort(results.begin(), results.end(),
                     [](const RealizationResult& a, const RealizationResult& b) {
                         if (a.bs_count != b.bs_count)
                             return a.bs_count > b.bs_count;
                         if (a.strategy != b.strategy)
                             return static_cast<int>(a.strategy) <
                                    static_cast<int>(b.strategy);
                         return a.realization < b.realization;
                     });
    return results;
}

SummaryTable summarize(const std::vector<RealizationResult>& results) {
    if (results.empty()) throw InvalidConfig("summarize: empty input");
    std::map<std::tuple<int, int, std::string>,
             std::tuple<double, double, double, int>>
        groups;
    std::vector<std::tuple<int, int, std::string>> order;
    for (const RealizationResult& rr : results) {
        if (!rr.valid) continue;
        for (const TestSetMetrics& m : rr.metrics) {
            auto key = std::make_tuple(rr.bs_count,
                                       static_cast<int>(rr.strategy), m.test_set);
            auto [it, inserted] =
                groups.try_emplace(key, std::make_tuple(0.0, 0.0, 0.0, 0));
            if (inserted) order.push_back(key);
            auto& [g, qi, qa, count] = it->second;
            g += m.gain;
            qi += m.q90_initial_m;
            qa += m.q90_after_m;
            ++count;
        }
    }
    SummaryTable table;
    for (const auto& key : order) {
        const auto& [g, qi, qa, count] = groups.at(key);
        SummaryRow row;
        row.bs_count = std::get<0>(key);
        row.strategy = static_cast<Strategy>(std::get<1>(key));
        row.test_set = std::get<2>(key);
        row.n_valid = count;
        row.mean_gain = g / count;
        row.mean_q90_initial_m = qi / count;
        row.mean_q90_after_m = qa / count;
        table.push_back(row);
    }
    return table;
}

}  // namespace alpos

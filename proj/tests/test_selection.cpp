#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "alpos/selection.hpp"

using namespace alpos;

namespace {

// Stub that always predicts the scene center in normalized coordinates.
Model center_stub() {
    const ModelArch arch{18, 4, 0, 2};
    Model m = init_model(arch, 0);
    for (auto& w : m.weights) w.setZero();
    return m;
}

Normalizer default_normalizer(const Dataset& d1, const Scene& scene) {
    return fit_normalizer(d1, scene);
}

// Brute-force oracle: all indices sorted by (score desc, index asc).
std::vector<int> top_k_oracle(const std::vector<double>& scores, int k) {
    std::vector<int> order(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    std::vector<int> out(order.begin(), order.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("positioning errors against a center-predicting stub") {
    const Scene scene = build_scene(SceneConfig{});
    Dataset d = generate_pool(scene, 64, 5);
    d.samples[0].position = Vec2(30.0, 60.0);
    d.samples[1].position = Vec2(0.0, 0.0);
    const Normalizer norm = default_normalizer(d, scene);
    const Model stub = center_stub();

    const std::vector<double> err = positioning_errors(stub, norm, d);
    REQUIRE(err.size() == 64);
    CHECK(err[0] == doctest::Approx(0.0));
    CHECK(err[1] == doctest::Approx(std::sqrt(30.0 * 30.0 + 60.0 * 60.0)));

    // permutation equivariance
    Dataset shuffled = d;
    std::reverse(shuffled.samples.begin(), shuffled.samples.end());
    const std::vector<double> rev = positioning_errors(stub, norm, shuffled);
    for (int i = 0; i < 64; ++i) CHECK(rev[63 - i] == doctest::Approx(err[i]));
}

TEST_CASE("top-k selection") {
    CHECK(top_k_indices({5, 1, 3, 2}, 2) == std::vector<int>{0, 2});
    CHECK(top_k_indices({2, 2, 1}, 1) == std::vector<int>{0});
    CHECK(top_k_indices({4, 7}, 0).empty());
    CHECK_THROWS_AS(top_k_indices({1, 2}, 3), OutOfRange);
    CHECK_THROWS_AS(top_k_indices({1, 2}, -1), OutOfRange);

    // oracle equivalence on vectors with heavy ties
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> len(1, 40), val(0, 5);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> scores(len(rng));
        for (double& s : scores) s = val(rng);
        std::uniform_int_distribution<int> kd(0, int(scores.size()));
        const int k = kd(rng);
        CHECK(top_k_indices(scores, k) == top_k_oracle(scores, k));
    }
}

TEST_CASE("random selection") {
    const SelectionResult r = select_random(1700, 170, 3);
    CHECK(r.selected_indices.size() == 170);
    CHECK(r.scores.empty());
    std::set<int> unique(r.selected_indices.begin(), r.selected_indices.end());
    CHECK(unique.size() == 170);
    for (int i : r.selected_indices) {
        CHECK(i >= 0);
        CHECK(i < 1700);
    }
    const SelectionResult again = select_random(1700, 170, 3);
    CHECK(again.selected_indices == r.selected_indices);
    CHECK(select_random(10, 10, 1).selected_indices ==
          std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK_THROWS_AS(select_random(5, 6, 1), OutOfRange);
}

TEST_CASE("genie selects the largest-error candidates") {
    const Scene scene = build_scene(SceneConfig{});
    const Dataset candidates = generate_pool(scene, 200, 17);
    const Normalizer norm = default_normalizer(candidates, scene);
    const Model stub = center_stub();

    const SelectionResult r = select_genie(stub, norm, candidates, 20);
    REQUIRE(r.selected_indices.size() == 20);
    // selection boundary: min selected score >= max non-selected score
    std::set<int> sel(r.selected_indices.begin(), r.selected_indices.end());
    double min_sel = 1e300, max_rest = -1e300;
    for (int i = 0; i < 200; ++i) {
        if (sel.count(i))
            min_sel = std::min(min_sel, r.scores[i]);
        else
            max_rest = std::max(max_rest, r.scores[i]);
    }
    CHECK(min_sel >= max_rest);

    // with a center stub, scores are distances from (30, 60)
    for (int i = 0; i < 200; ++i)
        CHECK(r.scores[i] ==
              doctest::Approx(
                  (candidates.samples[i].position - Vec2(30, 60)).norm()));

    CHECK(select_genie(stub, norm, candidates, 200).selected_indices.size() ==
          200);
}

TEST_CASE("practical with a perfect inverse oracle equals genie") {
    const Scene scene = build_scene(SceneConfig{});
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const Dataset candidates = generate_pool(scene, 120, 300 + trial);
        const Normalizer norm = default_normalizer(candidates, scene);
        const Model nn1a = init_model(ModelArch{18, 16, 2, 2}, 40 + trial);

        std::vector<Vec2> positions;
        for (const Sample& s : candidates.samples)
            positions.push_back(s.position);
        // oracle predictor: return the true signals for each candidate
        SignalPredictor oracle = [&](const Eigen::MatrixXd& pos) {
            Eigen::MatrixXd out(18, pos.cols());
            for (int i = 0; i < pos.cols(); ++i)
                out.col(i) = candidates.samples[i].features;
            return out;
        };
        const int k = 12;
        const SelectionResult practical =
            select_practical(nn1a, norm, oracle, positions, k);
        const SelectionResult genie = select_genie(nn1a, norm, candidates, k);
        CHECK(practical.selected_indices == genie.selected_indices);
        for (int i = 0; i < 120; ++i)
            CHECK(practical.scores[i] == doctest::Approx(genie.scores[i]));
    }
}

TEST_CASE("practical via nn1b is deterministic and leaves models unchanged") {
    const Scene scene = build_scene(SceneConfig{});
    const Dataset candidates = generate_pool(scene, 80, 31);
    const Normalizer norm = default_normalizer(candidates, scene);
    const Model nn1a = init_model(ModelArch{18, 16, 2, 2}, 1);
    const Model nn1b = init_model(ModelArch{2, 16, 2, 18}, 2);
    const Model nn1a_copy = nn1a;
    const Model nn1b_copy = nn1b;

    std::vector<Vec2> positions;
    for (const Sample& s : candidates.samples) positions.push_back(s.position);
    const SelectionResult a =
        select_practical(nn1a, norm, nn1b, norm, positions, 8);
    const SelectionResult b =
        select_practical(nn1a, norm, nn1b, norm, positions, 8);
    CHECK(a.selected_indices == b.selected_indices);
    CHECK(a.scores == b.scores);
    for (std::size_t l = 0; l < nn1a.weights.size(); ++l)
        CHECK((nn1a.weights[l].array() == nn1a_copy.weights[l].array()).all());
    for (std::size_t l = 0; l < nn1b.weights.size(); ++l)
        CHECK((nn1b.weights[l].array() == nn1b_copy.weights[l].array()).all());

    CHECK(select_practical(nn1a, norm, nn1b, norm, positions, 0)
              .selected_indices.empty());

    const Model bad_b = init_model(ModelArch{2, 16, 2, 7}, 3);
    CHECK_THROWS_AS(select_practical(nn1a, norm, bad_b, norm, positions, 2),
                    DimensionMismatch);
}

}  // TEST_SUITE

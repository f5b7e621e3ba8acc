#include "alpos/selection.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "alpos/errors.hpp"
#include "alpos/rng.hpp"

namespace alpos {

std::vector<double> positioning_errors(const Model& model,
                                       const Normalizer& normalizer,
                                       const Dataset& samples) {
    const Eigen::MatrixXd features =
        normalizer.normalize_features(feature_matrix(samples));
    const Eigen::MatrixXd predicted =
        normalizer.denormalize_positions(forward(model, features));
    const Eigen::MatrixXd truth = position_matrix(samples);
    Eigen::VectorXd err = (predicted - truth).colwise().norm();
    return {err.data(), err.data() + err.size()};
}

std::vector<int> top_k_indices(const std::vector<double>& scores, int k) {
    if (k < 0 || k > static_cast<int>(scores.size()))
        throw OutOfRange("top_k_indices: k out of range");
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    // Stable sort by descending score keeps the lower index on ties.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scores[a] > scores[b];
    });
    std::vector<int> selected(order.begin(), order.begin() + k);
    std::sort(selected.begin(), selected.end());
    return selected;
}

SelectionResult select_random(int n_candidates, int k, std::uint64_t seed) {
    if (k < 0 || k > n_candidates)
        throw OutOfRange("select_random: k out of range");
    std::vector<int> order(n_candidates);
    std::iota(order.begin(), order.end(), 0);
    Rng rng = make_rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    SelectionResult result;
    result.selected_indices.assign(order.begin(), order.begin() + k);
    std::sort(result.selected_indices.begin(), result.selected_indices.end());
    return result;
}

SelectionResult select_genie(const Model& nn1a, const Normalizer& norm_a,
                             const Dataset& candidates, int k) {
    SelectionResult result;
    result.scores = positioning_errors(nn1a, norm_a, candidates);
    result.selected_indices = top_k_indices(result.scores, k);
    return result;
}

SelectionResult select_practical(const Model& nn1a, const Normalizer& norm_a,
                                 const SignalPredictor& predict_signals,
                                 const std::vector<Vec2>& candidate_positions,
                                 int k) {
    const int n = static_cast<int>(candidate_positions.size());
    Eigen::MatrixXd positions(2, n);
    for (int i = 0; i < n; ++i) positions.col(i) = candidate_positions[i];

    // Autoencoder-like pipeline: position -> estimated signals -> nn1a ->
    // estimated position; score is the gap to the input position.
    const Eigen::MatrixXd estimated_signals = predict_signals(positions);
    const Eigen::MatrixXd predicted = norm_a.denormalize_positions(
        forward(nn1a, norm_a.normalize_features(estimated_signals)));

    SelectionResult result;
    Eigen::VectorXd err = (predicted - positions).colwise().norm();
    result.scores.assign(err.data(), err.data() + err.size());
    result.selected_indices = top_k_indices(result.scores, k);
    return result;
}

SelectionResult select_practical(const Model& nn1a, const Normalizer& norm_a,
                                 const Model& nn1b, const Normalizer& norm_b,
                                 const std::vector<Vec2>& candidate_positions,
                                 int k) {
    if (nn1b.arch.output_dim != nn1a.arch.input_dim)
        throw DimensionMismatch(
            "select_practical: nn1b output dim != nn1a input dim");
    SignalPredictor predict = [&](const Eigen::MatrixXd& positions) {
        return norm_b.denormalize_features(
            forward(nn1b, norm_b.normalize_positions(positions)));
    };
    return select_practical(nn1a, norm_a, predict, candidate_positions, k);
}

void write_selection(const SelectionResult& result, int n_candidates,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.precision(17);
    out << "candidate_index,score,selected\n";
    std::vector<bool> selected(n_candidates, false);
    for (int i : result.selected_indices) selected[i] = true;
    for (int i = 0; i < n_candidates; ++i) {
        out << i << ',';
        if (!result.scores.empty()) out << result.scores[i];
        out << ',' << (selected[i] ? 1 : 0) << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace alpos

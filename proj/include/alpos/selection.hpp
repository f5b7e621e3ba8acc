#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "alpos/dataset.hpp"
#include "alpos/network.hpp"
#include "alpos/normalizer.hpp"

namespace alpos {

enum class SelectionMethod { Random, Genie, Practical };

struct SelectionResult {
    std::vector<int> selected_indices;  // sorted ascending
    std::vector<double> scores;         // empty for Random
};

// Per-sample horizontal positioning error of a trained model, in meters.
std::vector<double> positioning_errors(const Model& model,
                                       const Normalizer& normalizer,
                                       const Dataset& samples);

// Indices of the k largest scores; ties go to the lower index.
std::vector<int> top_k_indices(const std::vector<double>& scores, int k);

SelectionResult select_random(int n_candidates, int k, std::uint64_t seed);

// Rank candidates by the true-signal positioning error of nn1a.
SelectionResult select_genie(const Model& nn1a, const Normalizer& norm_a,
                             const Dataset& candidates, int k);

// Maps a 2 x n matrix of positions to an (n_features x n) matrix of
// estimated signals in dB.
using SignalPredictor =
    std::function<Eigen::MatrixXd(const Eigen::MatrixXd& positions)>;

// Rank candidates by the error of nn1a fed with predicted signals. Neither
// model is modified. candidate_positions supplies both the predictor inputs
// and the reference positions for the error.
SelectionResult select_practical(const Model& nn1a, const Normalizer& norm_a,
                                 const SignalPredictor& predict_signals,
                                 const std::vector<Vec2>& candidate_positions,
                                 int k);

// The paper's pipeline: nn1b estimates the signals.
SelectionResult select_practical(const Model& nn1a, const Normalizer& norm_a,
                                 const Model& nn1b, const Normalizer& norm_b,
                                 const std::vector<Vec2>& candidate_positions,
                                 int k);

// Delimited text: candidate_index, score (empty for Random), selected flag.
void write_selection(const SelectionResult& result, int n_candidates,
                     const std::string& path);

}  // namespace alpos

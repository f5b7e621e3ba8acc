#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "alpos/network.hpp"

namespace alpos {

struct TrainConfig {
    double learning_rate = 1e-3;
    double fine_tune_lr = 5e-4;
    int batch_size = 256;
    int epochs = 2000;
    int fine_tune_epochs = 600;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(learning_rate > 0.0) || !(fine_tune_lr > 0.0))
            throw InvalidConfig("TrainConfig: learning rates must be > 0");
        if (batch_size < 1) throw InvalidConfig("TrainConfig: batch_size >= 1");
        if (epochs < 1 || fine_tune_epochs < 1)
            throw InvalidConfig("TrainConfig: epochs >= 1");
    }
};

struct TrainResult {
    Model model;
    std::vector<double> loss_history;  // per-epoch mean loss
};

// Mini-batch Adam on the MSE loss. inputs/targets hold one sample per
// column, already normalized. Fine-tuning is the same call on an existing
// model: optimizer state always starts fresh. Throws TrainingDiverged if
// the loss stops being finite.
TrainResult train(Model model, const Eigen::MatrixXd& inputs,
                  const Eigen::MatrixXd& targets, const TrainConfig& config,
                  double learning_rate, int epochs);

inline TrainResult train(Model model, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets,
                         const TrainConfig& config) {
    return train(std::move(model), inputs, targets, config,
                 config.learning_rate, config.epochs);
}

// Central-difference check of the analytic gradients on one (input, target)
// pair, over a random parameter subset (1% of the parameters, at least 50).
// Inputs that land a pre-activation near a ReLU kink are resampled so the
// finite-difference stencil stays within one linear region. Returns the
// maximum relative error.
double finite_difference_check(const Model& model, Eigen::VectorXd input,
                               const Eigen::VectorXd& target,
                               std::uint64_t seed = 1);

}  // namespace alpos

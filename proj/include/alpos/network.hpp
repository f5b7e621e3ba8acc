#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "alpos/errors.hpp"

namespace alpos {

// Dense residual MLP: input layer, n_hidden hidden-to-hidden layers with
// identity skips around consecutive pairs (1-2, 3-4, ...), linear output.
// ReLU after every layer except the output.
struct ModelArch {
    int input_dim = 18;
    int hidden_width = 120;
    int n_hidden = 7;
    int output_dim = 2;

    void validate() const {
        if (input_dim < 1 || hidden_width < 1 || n_hidden < 0 || output_dim < 1)
            throw InvalidConfig("ModelArch: all dims must be >= 1");
    }

    // Layer count including the input and output layers.
    int n_layers() const { return n_hidden + 2; }

    std::int64_t parameter_count() const {
        std::int64_t count =
            static_cast<std::int64_t>(input_dim) * hidden_width + hidden_width;
        count += static_cast<std::int64_t>(n_hidden) *
                 (static_cast<std::int64_t>(hidden_width) * hidden_width +
                  hidden_width);
        count += static_cast<std::int64_t>(hidden_width) * output_dim +
                 output_dim;
        return count;
    }
};

struct Model {
    ModelArch arch;
    std::vector<Eigen::MatrixXd> weights;  // weights[l] is (out_l x in_l)
    std::vector<Eigen::VectorXd> biases;

    std::int64_t parameter_count() const { return arch.parameter_count(); }
};

// Fan-in-scaled symmetric uniform weights, zero biases.
Model init_model(const ModelArch& arch, std::uint64_t seed);

// Forward pass; columns of input are batch entries.
Eigen::MatrixXd forward(const Model& model, const Eigen::MatrixXd& input);

inline Eigen::VectorXd forward(const Model& model,
                               const Eigen::VectorXd& input) {
    return forward(model, Eigen::MatrixXd(input));
}

// Squared Euclidean error, averaged over batch columns.
double loss_mse(const Eigen::MatrixXd& prediction,
                const Eigen::MatrixXd& target);

// Gradients of loss_mse w.r.t. every weight and bias, plus the loss value.
struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    double loss = 0.0;
};

Gradients backward(const Model& model, const Eigen::MatrixXd& input,
                   const Eigen::MatrixXd& target);

}  // namespace alpos

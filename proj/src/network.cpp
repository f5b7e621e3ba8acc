#include "alpos/network.hpp"

#include <cmath>

#include "alpos/rng.hpp"

namespace alpos {
namespace {

// Skip connections wrap hidden layer pairs (1,2), (3,4), ...; the second
// layer of a pair receives the pair's input pre-activation. A trailing
// unpaired hidden layer stays plain.
bool closes_residual_pair(int hidden_index, int n_hidden) {
    return hidden_index % 2 == 0 && hidden_index <= n_hidden;
}

}  // namespace

Model init_model(const ModelArch& arch, std::uint64_t seed) {
    arch.validate();
    Model model;
    model.arch = arch;

    std::vector<std::pair<int, int>> shapes;  // (out, in) per layer
    shapes.emplace_back(arch.hidden_width, arch.input_dim);
    for (int l = 0; l < arch.n_hidden; ++l)
        shapes.emplace_back(arch.hidden_width, arch.hidden_width);
    shapes.emplace_back(arch.output_dim, arch.hidden_width);

    Rng rng = make_rng(seed);
    for (auto [out, in] : shapes) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::uniform_real_distribution<double> uniform(-bound, bound);
        Eigen::MatrixXd w(out, in);
        for (int j = 0; j < in; ++j)
            for (int i = 0; i < out; ++i) w(i, j) = uniform(rng);
        model.weights.push_back(std::move(w));
        model.biases.push_back(Eigen::VectorXd::Zero(out));
    }
    return model;
}

Eigen::MatrixXd forward(const Model& model, const Eigen::MatrixXd& input) {
    const ModelArch& arch = model.arch;
    if (input.rows() != arch.input_dim)
        throw DimensionMismatch("forward: input dim " +
                                std::to_string(input.rows()) + " != " +
                                std::to_string(arch.input_dim));

    Eigen::MatrixXd h =
        ((model.weights[0] * input).colwise() + model.biases[0])
            .cwiseMax(0.0);
    Eigen::MatrixXd pair_input;
    for (int l = 1; l <= arch.n_hidden; ++l) {
        if (l % 2 == 1) pair_input = h;
        Eigen::MatrixXd z = (model.weights[l] * h).colwise() + model.biases[l];
        if (l % 2 == 0 && closes_residual_pair(l, arch.n_hidden))
            z += pair_input;
        h = z.cwiseMax(0.0);
    }
    return (model.weights.back() * h).colwise() + model.biases.back();
}

double loss_mse(const Eigen::MatrixXd& prediction,
                const Eigen::MatrixXd& target) {
    if (prediction.rows() != target.rows() ||
        prediction.cols() != target.cols())
        throw DimensionMismatch("loss_mse: shape mismatch");
    return (prediction - target).colwise().squaredNorm().mean();
}

Gradients backward(const Model& model, const Eigen::MatrixXd& input,
                   const Eigen::MatrixXd& target) {
    const ModelArch& arch = model.arch;
    if (input.rows() != arch.input_dim || target.rows() != arch.output_dim ||
        input.cols() != target.cols())
        throw DimensionMismatch("backward: shape mismatch");
    const int n_layers = arch.n_layers();
    const double batch = static_cast<double>(input.cols());

    // Forward with cached activations; activations[l] is the ReLU output of
    // layer l (l < n_layers-1), activations.back() the linear output.
    std::vector<Eigen::MatrixXd> activations(n_layers);
    activations[0] = ((model.weights[0] * input).colwise() + model.biases[0])
                         .cwiseMax(0.0);
    for (int l = 1; l <= arch.n_hidden; ++l) {
        Eigen::MatrixXd z =
            (model.weights[l] * activations[l - 1]).colwise() +
            model.biases[l];
        if (l % 2 == 0 && closes_residual_pair(l, arch.n_hidden))
            z += activations[l - 2];
        activations[l] = z.cwiseMax(0.0);
    }
    activations[n_layers - 1] =
        (model.weights.back() * activations[n_layers - 2]).colwise() +
        model.biases.back();

    Gradients grads;
    grads.weights.resize(n_layers);
    grads.biases.resize(n_layers);
    grads.loss = loss_mse(activations[n_layers - 1], target);

    // delta holds dL/dz of the current layer.
    Eigen::MatrixXd delta =
        2.0 / batch * (activations[n_layers - 1] - target);
    grads.weights[n_layers - 1] =
        delta * activations[n_layers - 2].transpose();
    grads.biases[n_layers - 1] = delta.rowwise().sum();

    // skip_delta[l] collects the gradient flowing through the identity skip
    // into the output of hidden layer l.
    std::vector<Eigen::MatrixXd> skip_delta(n_layers);
    Eigen::MatrixXd upstream = model.weights[n_layers - 1].transpose() * delta;
    for (int l = arch.n_hidden; l >= 1; --l) {
        if (skip_delta[l].size() > 0) upstream += skip_delta[l];
        delta = upstream.cwiseProduct(
            (activations[l].array() > 0.0).cast<double>().matrix());
        grads.weights[l] = delta * activations[l - 1].transpose();
        grads.biases[l] = delta.rowwise().sum();
        upstream = model.weights[l].transpose() * delta;
        if (l % 2 == 0 && closes_residual_pair(l, arch.n_hidden))
            skip_delta[l - 2] = delta;
    }
    if (skip_delta[0].size() > 0) upstream += skip_delta[0];
    delta = upstream.cwiseProduct(
        (activations[0].array() > 0.0).cast<double>().matrix());
    grads.weights[0] = delta * input.transpose();
    grads.biases[0] = delta.rowwise().sum();
    return grads;
}

}  // namespace alpos

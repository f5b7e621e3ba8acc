#include "alpos/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "alpos/rng.hpp"

namespace alpos {
namespace {

struct AdamState {
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::VectorXd> m_b, v_b;
    long step = 0;

    explicit AdamState(const Model& model) {
        for (const auto& w : model.weights) {
            m_w.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
            v_w.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        }
        for (const auto& b : model.biases) {
            m_b.push_back(Eigen::VectorXd::Zero(b.size()));
            v_b.push_back(Eigen::VectorXd::Zero(b.size()));
        }
    }
};

template <typename T>
void adam_update(T& param, const T& grad, T& m, T& v, double lr, double b1,
                 double b2, double eps, long step) {
    m = b1 * m + (1.0 - b1) * grad;
    v = (b2 * v).eval();
    v.array() += (1.0 - b2) * grad.array().square();
    const double bias1 = 1.0 - std::pow(b1, static_cast<double>(step));
    const double bias2 = 1.0 - std::pow(b2, static_cast<double>(step));
    param.array() -=
        lr * (m.array() / bias1) / ((v.array() / bias2).sqrt() + eps);
}

}  // namespace

TrainResult train(Model model, const Eigen::MatrixXd& inputs,
                  const Eigen::MatrixXd& targets, const TrainConfig& config,
                  double learning_rate, int epochs) {
    config.validate();
    if (inputs.cols() == 0) throw InvalidConfig("train: empty dataset");
    if (inputs.rows() != model.arch.input_dim ||
        targets.rows() != model.arch.output_dim ||
        inputs.cols() != targets.cols())
        throw DimensionMismatch("train: data shape does not match arch");

    const int n = static_cast<int>(inputs.cols());
    const int batch_size = std::min(config.batch_size, n);
    AdamState opt(model);
    Rng shuffle_rng = make_rng(config.seed);

    TrainResult result;
    result.loss_history.reserve(epochs);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    Eigen::MatrixXd batch_in(inputs.rows(), batch_size);
    Eigen::MatrixXd batch_tgt(targets.rows(), batch_size);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        for (int start = 0; start < n; start += batch_size) {
            const int count = std::min(batch_size, n - start);
            batch_in.resize(inputs.rows(), count);
            batch_tgt.resize(targets.rows(), count);
            for (int j = 0; j < count; ++j) {
                batch_in.col(j) = inputs.col(order[start + j]);
                batch_tgt.col(j) = targets.col(order[start + j]);
            }
            Gradients grads = backward(model, batch_in, batch_tgt);
            if (!std::isfinite(grads.loss))
                throw TrainingDiverged(
                    "train: non-finite loss at epoch " + std::to_string(epoch));
            epoch_loss += grads.loss * count;
            ++opt.step;
            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                adam_update(model.weights[l], grads.weights[l], opt.m_w[l],
                            opt.v_w[l], learning_rate, config.adam_beta1,
                            config.adam_beta2, config.adam_eps, opt.step);
                adam_update(model.biases[l], grads.biases[l], opt.m_b[l],
                            opt.v_b[l], learning_rate, config.adam_beta1,
                            config.adam_beta2, config.adam_eps, opt.step);
            }
        }
        result.loss_history.push_back(epoch_loss / n);
    }
    result.model = std::move(model);
    return result;
}

double finite_difference_check(const Model& model, Eigen::VectorXd input,
                               const Eigen::VectorXd& target,
                               std::uint64_t seed) {
    const double h = 1e-5;
    Rng rng = make_rng(seed);

    // Keep every pre-activation away from the ReLU kink so both stencil
    // evaluations stay in the same linear region.
    auto kink_adjacent = [&](const Eigen::VectorXd& x) {
        const ModelArch& arch = model.arch;
        Eigen::VectorXd z = model.weights[0] * x + model.biases[0];
        Eigen::VectorXd a = z.cwiseMax(0.0);
        if (z.cwiseAbs().minCoeff() < 1e-3) return true;
        Eigen::VectorXd pair_input;
        for (int l = 1; l <= arch.n_hidden; ++l) {
            if (l % 2 == 1) pair_input = a;
            Eigen::VectorXd zl = model.weights[l] * a + model.biases[l];
            if (l % 2 == 0) zl += pair_input;
            if (zl.cwiseAbs().minCoeff() < 1e-3) return true;
            a = zl.cwiseMax(0.0);
        }
        return false;
    };
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 100 && kink_adjacent(input); ++attempt)
        for (int i = 0; i < input.size(); ++i) input(i) = gauss(rng);

    Model work = model;
    Gradients analytic = backward(work, input, target);

    const std::int64_t total = model.parameter_count();
    std::int64_t n_checked = std::max<std::int64_t>(50, total / 100);
    n_checked = std::min(n_checked, total);

    // Flat indexing over (layer, weight entries..., bias entries...).
    std::vector<std::int64_t> layer_offsets;
    std::int64_t offset = 0;
    for (std::size_t l = 0; l < work.weights.size(); ++l) {
        layer_offsets.push_back(offset);
        offset += work.weights[l].size() + work.biases[l].size();
    }
    std::uniform_int_distribution<std::int64_t> pick(0, total - 1);

    auto eval_loss = [&]() {
        return loss_mse(forward(work, Eigen::MatrixXd(input)),
                        Eigen::MatrixXd(target));
    };

    double max_rel_err = 0.0;
    for (std::int64_t k = 0; k < n_checked; ++k) {
        const std::int64_t flat = pick(rng);
        std::size_t layer = work.weights.size() - 1;
        while (layer > 0 && layer_offsets[layer] > flat) --layer;
        std::int64_t local = flat - layer_offsets[layer];
        double* slot;
        double analytic_grad;
        if (local < work.weights[layer].size()) {
            slot = work.weights[layer].data() + local;
            analytic_grad = analytic.weights[layer].data()[local];
        } else {
            local -= work.weights[layer].size();
            slot = work.biases[layer].data() + local;
            analytic_grad = analytic.biases[layer].data()[local];
        }
        const double saved = *slot;
        *slot = saved + h;
        const double plus = eval_loss();
        *slot = saved - h;
        const double minus = eval_loss();
        *slot = saved;
        const double numeric_grad = (plus - minus) / (2.0 * h);
        const double scale =
            std::max({std::abs(analytic_grad), std::abs(numeric_grad), 1e-8});
        max_rel_err =
            std::max(max_rel_err, std::abs(analytic_grad - numeric_grad) / scale);
    }
    return max_rel_err;
}

}  // namespace alpos

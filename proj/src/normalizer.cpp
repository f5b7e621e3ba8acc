#include "alpos/normalizer.hpp"

#include <cmath>

#include "alpos/errors.hpp"

namespace alpos {

Eigen::MatrixXd feature_matrix(const Dataset& dataset) {
    const int nf = dataset.n_features();
    Eigen::MatrixXd out(nf, dataset.size());
    for (int k = 0; k < dataset.size(); ++k)
        out.col(k) = dataset.samples[k].features;
    return out;
}

Eigen::MatrixXd position_matrix(const Dataset& dataset) {
    Eigen::MatrixXd out(2, dataset.size());
    for (int k = 0; k < dataset.size(); ++k)
        out.col(k) = dataset.samples[k].position;
    return out;
}

Normalizer fit_normalizer(const Dataset& dataset, const Scene& scene) {
    if (dataset.samples.empty())
        throw InvalidConfig("fit_normalizer: empty dataset");
    const Eigen::MatrixXd features = feature_matrix(dataset);

    Normalizer norm;
    norm.feature_means = features.rowwise().mean();
    Eigen::MatrixXd centered = features.colwise() - norm.feature_means;
    norm.feature_stds =
        (centered.array().square().rowwise().mean()).sqrt().matrix();
    norm.feature_stds = norm.feature_stds.cwiseMax(1e-6);
    norm.position_center =
        Vec2(scene.config.width_m / 2.0, scene.config.length_m / 2.0);
    norm.position_half_extent =
        Vec2(scene.config.width_m / 2.0, scene.config.length_m / 2.0);
    return norm;
}

}  // namespace alpos

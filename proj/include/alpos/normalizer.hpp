#pragma once

#include <Eigen/Core>

#include "alpos/dataset.hpp"
#include "alpos/scene.hpp"

namespace alpos {

// Feature standardization (per-BS mean/std, std floored at 1e-6) and the
// affine map between scene coordinates and [-1, 1]^2.
struct Normalizer {
    Eigen::VectorXd feature_means;
    Eigen::VectorXd feature_stds;
    Vec2 position_center{0.0, 0.0};
    Vec2 position_half_extent{1.0, 1.0};

    Eigen::MatrixXd normalize_features(const Eigen::MatrixXd& features) const {
        return (features.colwise() - feature_means).array().colwise() /
               feature_stds.array();
    }
    Eigen::MatrixXd denormalize_features(const Eigen::MatrixXd& normed) const {
        return (normed.array().colwise() * feature_stds.array()).matrix()
                   .colwise() +
               feature_means;
    }
    Eigen::MatrixXd normalize_positions(const Eigen::MatrixXd& pos) const {
        Eigen::MatrixXd out = pos;
        out.row(0) = (pos.row(0).array() - position_center.x()) /
                     position_half_extent.x();
        out.row(1) = (pos.row(1).array() - position_center.y()) /
                     position_half_extent.y();
        return out;
    }
    Eigen::MatrixXd denormalize_positions(const Eigen::MatrixXd& normed) const {
        Eigen::MatrixXd out = normed;
        out.row(0) = normed.row(0).array() * position_half_extent.x() +
                     position_center.x();
        out.row(1) = normed.row(1).array() * position_half_extent.y() +
                     position_center.y();
        return out;
    }
};

Normalizer fit_normalizer(const Dataset& dataset, const Scene& scene);

// Column-per-sample views of a dataset for training.
Eigen::MatrixXd feature_matrix(const Dataset& dataset);
Eigen::MatrixXd position_matrix(const Dataset& dataset);

}  // namespace alpos

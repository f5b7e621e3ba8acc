#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "alpos/scene.hpp"

namespace alpos {

// Per-BS spatially consistent random fields: a unit-variance Gaussian field
// driving shadow fading and an independent one driving the LoS indicator.
// Fields are sampled exactly on a regular grid (exponential covariance,
// Cholesky factorization) and bilinearly interpolated between nodes.
class ShadowAndLosFields {
  public:
    ShadowAndLosFields(const Scene& scene, std::uint64_t seed);

    // Shadow fading in dB at (x, y) for BS b, given the link's LoS state.
    double shadow_db(int bs, const Vec2& p, bool los) const;

    // LoS state of the link BS b <-> (x, y); frozen by the realization.
    bool is_los(int bs, const Vec2& p) const;

    int n_bs() const { return static_cast<int>(shadow_grids_.size()); }
    double grid_spacing_m() const { return spacing_m_; }

  private:
    double interpolate(const Eigen::MatrixXd& grid, const Vec2& p) const;

    const Scene* scene_;
    double spacing_m_;
    int nx_ = 0, ny_ = 0;
    double sigma_los_db_, sigma_nlos_db_;
    std::vector<Eigen::MatrixXd> shadow_grids_;  // unit-variance node values
    std::vector<Eigen::MatrixXd> los_grids_;
};

ShadowAndLosFields generate_fields(const Scene& scene, std::uint64_t seed);

}  // namespace alpos

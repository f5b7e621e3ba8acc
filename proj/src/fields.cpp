#include "alpos/fields.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "alpos/rng.hpp"

namespace alpos {
namespace {

constexpr double kGridSpacing = 2.0;  // m between field nodes

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

ShadowAndLosFields::ShadowAndLosFields(const Scene& scene, std::uint64_t seed)
    : scene_(&scene), spacing_m_(kGridSpacing) {
    const SceneConfig& c = scene.config;
    sigma_los_db_ = c.sigma_sf_los_db;
    sigma_nlos_db_ = c.sigma_sf_nlos_db;
    nx_ = static_cast<int>(std::ceil(c.width_m / spacing_m_)) + 1;
    ny_ = static_cast<int>(std::ceil(c.length_m / spacing_m_)) + 1;
    const int n = nx_ * ny_;

    // Exact node covariance exp(-d / corr_dist), factorized once and shared
    // by every field of this realization.
    Eigen::MatrixXd cov(n, n);
    for (int j = 0; j < n; ++j) {
        const double xj = (j % nx_) * spacing_m_;
        const double yj = (j / nx_) * spacing_m_;
        for (int i = j; i < n; ++i) {
            const double xi = (i % nx_) * spacing_m_;
            const double yi = (i / nx_) * spacing_m_;
            const double d = std::hypot(xi - xj, yi - yj);
            cov(i, j) = std::exp(-d / c.shadow_corr_dist_m);
        }
    }
    // Small jitter keeps the factorization stable for dense grids.
    cov.diagonal().array() += 1e-10;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    const Eigen::MatrixXd chol_l = llt.matrixL();

    Rng rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw_field = [&]() {
        Eigen::VectorXd z(n);
        for (int i = 0; i < n; ++i) z(i) = gauss(rng);
        Eigen::VectorXd v = chol_l * z;
        return Eigen::MatrixXd(Eigen::Map<Eigen::MatrixXd>(v.data(), nx_, ny_));
    };

    shadow_grids_.reserve(scene.n_bs());
    los_grids_.reserve(scene.n_bs());
    for (int b = 0; b < scene.n_bs(); ++b) {
        shadow_grids_.push_back(draw_field());
        los_grids_.push_back(draw_field());
    }
}

double ShadowAndLosFields::interpolate(const Eigen::MatrixXd& grid,
                                       const Vec2& p) const {
    double gx = p.x() / spacing_m_;
    double gy = p.y() / spacing_m_;
    int ix = std::min(static_cast<int>(std::floor(gx)), nx_ - 2);
    int iy = std::min(static_cast<int>(std::floor(gy)), ny_ - 2);
    ix = std::max(ix, 0);
    iy = std::max(iy, 0);
    const double u = gx - ix;
    const double v = gy - iy;
    return (1 - u) * (1 - v) * grid(ix, iy) + u * (1 - v) * grid(ix + 1, iy) +
           (1 - u) * v * grid(ix, iy + 1) + u * v * grid(ix + 1, iy + 1);
}

double ShadowAndLosFields::shadow_db(int bs, const Vec2& p, bool los) const {
    const double sigma = los ? sigma_los_db_ : sigma_nlos_db_;
    return sigma * interpolate(shadow_grids_[bs], p);
}

bool ShadowAndLosFields::is_los(int bs, const Vec2& p) const {
    const Vec3& b = scene_->bs_positions[bs];
    const double d2d = std::hypot(p.x() - b.x(), p.y() - b.y());
    const double u = std_normal_cdf(interpolate(los_grids_[bs], p));
    return u < los_probability(*scene_, d2d);
}

ShadowAndLosFields generate_fields(const Scene& scene, std::uint64_t seed) {
    return ShadowAndLosFields(scene, seed);
}

}  // namespace alpos

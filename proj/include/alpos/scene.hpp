#pragma once

#include <Eigen/Core>
#include <vector>

#include "alpos/errors.hpp"

namespace alpos {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Indoor-factory geometry and channel constants. All distances in meters,
// shadow-fading sigmas in dB, carrier in GHz.
struct SceneConfig {
    double width_m = 60.0;
    double length_m = 120.0;
    double height_m = 10.0;
    double bs_spacing_m = 20.0;
    double bs_height_m = 8.0;
    double ue_height_m = 1.5;
    double carrier_ghz = 3.5;
    double clutter_density = 0.6;
    double clutter_height_m = 6.0;
    double clutter_size_m = 2.0;
    double shadow_corr_dist_m = 10.0;
    double sigma_sf_los_db = 4.0;
    double sigma_sf_nlos_db = 7.2;

    void validate() const;
};

struct Scene {
    SceneConfig config;
    std::vector<Vec3> bs_positions;  // row-major grid order

    int n_bs() const { return static_cast<int>(bs_positions.size()); }
    bool contains(const Vec2& p) const {
        return p.x() >= 0.0 && p.x() <= config.width_m && p.y() >= 0.0 &&
               p.y() <= config.length_m;
    }
};

// Regular BS grid: x in {10,30,50}, y in {10,30,...,110} for the defaults,
// giving the 18-station 3x6 layout with 20 m spacing.
Scene build_scene(const SceneConfig& config);

// LoS probability of the dense-clutter high-BS indoor factory model,
// exp(-d2d/k) with k set by clutter density/size and antenna heights.
double los_probability(const Scene& scene, double d2d_m);

// InF-DH path loss in dB at 3D distance d3d_m (>= 1 m enforced by clamping
// at the query site; here d3d < 1 raises).
double path_loss(const Scene& scene, double d3d_m, bool los);

}  // namespace alpos

#include "alpos/scene.hpp"

#include <cmath>

namespace alpos {

void SceneConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw InvalidConfig(std::string(name) + " must be > 0");
    };
    positive(width_m, "width_m");
    positive(length_m, "length_m");
    positive(height_m, "height_m");
    positive(bs_spacing_m, "bs_spacing_m");
    positive(bs_height_m, "bs_height_m");
    positive(ue_height_m, "ue_height_m");
    positive(carrier_ghz, "carrier_ghz");
    positive(clutter_height_m, "clutter_height_m");
    positive(clutter_size_m, "clutter_size_m");
    positive(shadow_corr_dist_m, "shadow_corr_dist_m");
    if (!(sigma_sf_los_db >= 0.0) || !(sigma_sf_nlos_db >= 0.0))
        throw InvalidConfig("sigma_sf must be >= 0");
    if (!(clutter_density > 0.0 && clutter_density < 1.0))
        throw InvalidConfig("clutter_density must lie in (0,1)");
    if (!(ue_height_m < clutter_height_m && clutter_height_m < bs_height_m))
        throw InvalidConfig("heights must satisfy ue < clutter < bs");
}

Scene build_scene(const SceneConfig& config) {
    config.validate();
    Scene scene;
    scene.config = config;

    const double d = config.bs_spacing_m;
    const int nx = static_cast<int>(std::floor(config.width_m / d));
    const int ny = static_cast<int>(std::floor(config.length_m / d));
    // Symmetric grid: margins of d/2 on each side for the default geometry.
    const double x0 = (config.width_m - (nx - 1) * d) / 2.0;
    const double y0 = (config.length_m - (ny - 1) * d) / 2.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            scene.bs_positions.emplace_back(x0 + ix * d, y0 + iy * d,
                                            config.bs_height_m);
    return scene;
}

double los_probability(const Scene& scene, double d2d_m) {
    const SceneConfig& c = scene.config;
    const double k = -(c.clutter_size_m / std::log(1.0 - c.clutter_density)) *
                     (c.bs_height_m - c.ue_height_m) /
                     (c.clutter_height_m - c.ue_height_m);
    return std::exp(-d2d_m / k);
}

double path_loss(const Scene& scene, double d3d_m, bool los) {
    if (d3d_m < 1.0) throw OutOfRange("path_loss: d3d below 1 m");
    const double fc = scene.config.carrier_ghz;
    const double pl_los =
        31.84 + 21.50 * std::log10(d3d_m) + 19.00 * std::log10(fc);
    if (los) return pl_los;
    const double pl_nlos =
        33.63 + 21.9 * std::log10(d3d_m) + 20.0 * std::log10(fc);
    return std::max(pl_los, pl_nlos);
}

}  // namespace alpos

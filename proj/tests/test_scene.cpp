#include <doctest.h>

#include <cmath>

#include "alpos/scene.hpp"

using namespace alpos;

TEST_SUITE("scene") {

TEST_CASE("default layout is the 18-station 3x6 grid") {
    const Scene scene = build_scene(SceneConfig{});
    REQUIRE(scene.n_bs() == 18);
    CHECK(scene.bs_positions[0].isApprox(Vec3(10, 10, 8)));
    // row-major: the next station steps across the width
    CHECK(scene.bs_positions[1].isApprox(Vec3(30, 10, 8)));
    CHECK(scene.bs_positions[3].isApprox(Vec3(10, 30, 8)));
    CHECK(scene.bs_positions[17].isApprox(Vec3(50, 110, 8)));

    for (const Vec3& bs : scene.bs_positions) {
        CHECK(bs.x() >= 0);
        CHECK(bs.x() <= 60);
        CHECK(bs.y() >= 0);
        CHECK(bs.y() <= 120);
    }
    // neighbor spacing along both grid axes
    CHECK((scene.bs_positions[1] - scene.bs_positions[0]).norm() ==
          doctest::Approx(20.0));
    CHECK((scene.bs_positions[3] - scene.bs_positions[0]).norm() ==
          doctest::Approx(20.0));
}

TEST_CASE("exhaustive layout check: only the symmetric 3x6 grid fits") {
    // 20 m spacing inside 60x120 admits at most 3 columns and 6 rows; the
    // symmetric placement has 10 m margins everywhere.
    const Scene scene = build_scene(SceneConfig{});
    int i = 0;
    for (int iy = 0; iy < 6; ++iy)
        for (int ix = 0; ix < 3; ++ix, ++i)
            CHECK(scene.bs_positions[i].isApprox(
                Vec3(10 + 20 * ix, 10 + 20 * iy, 8)));
}

TEST_CASE("invalid configs are rejected") {
    SceneConfig bad;
    bad.clutter_density = 1.2;
    CHECK_THROWS_AS(build_scene(bad), InvalidConfig);
    bad = SceneConfig{};
    bad.width_m = -1;
    CHECK_THROWS_AS(build_scene(bad), InvalidConfig);
    bad = SceneConfig{};
    bad.clutter_height_m = 9.0;  // above the BS
    CHECK_THROWS_AS(build_scene(bad), InvalidConfig);
}

TEST_CASE("los probability") {
    const Scene scene = build_scene(SceneConfig{});
    CHECK(los_probability(scene, 0.0) == doctest::Approx(1.0));

    // k = -(2 / ln(0.4)) * (8-1.5)/(6-1.5) = 3.1527 m
    const double k = -(2.0 / std::log(0.4)) * 6.5 / 4.5;
    CHECK(k == doctest::Approx(3.1527).epsilon(1e-4));
    CHECK(los_probability(scene, k) == doctest::Approx(std::exp(-1.0)));
    CHECK(los_probability(scene, 50.0) < 1e-6);

    // non-increasing and bounded on a 1000-point grid
    double prev = 1.0;
    for (int i = 0; i < 1000; ++i) {
        const double p = los_probability(scene, i * 0.2);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("path loss values at 3.5 GHz") {
    const Scene scene = build_scene(SceneConfig{});
    CHECK(path_loss(scene, 1.0, true) ==
          doctest::Approx(31.84 + 19.0 * std::log10(3.5)));
    CHECK(path_loss(scene, 1.0, true) == doctest::Approx(42.18).epsilon(1e-3));
    CHECK(path_loss(scene, 1.0, false) ==
          doctest::Approx(33.63 + 20.0 * std::log10(3.5)));
    CHECK(path_loss(scene, 1.0, false) == doctest::Approx(44.51).epsilon(1e-3));
    // 21.5 dB per decade in LoS
    CHECK(path_loss(scene, 10.0, true) - path_loss(scene, 1.0, true) ==
          doctest::Approx(21.50));
    CHECK_THROWS_AS(path_loss(scene, 0.5, true), OutOfRange);
}

TEST_CASE("nlos path loss lower-bounded by the los curve") {
    Scene scene = build_scene(SceneConfig{});
    for (double d = 1.0; d < 200.0; d *= 1.5)
        CHECK(path_loss(scene, d, false) >= path_loss(scene, d, true));
}

}  // TEST_SUITE

#include <doctest.h>
#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "alpos/checkpoint.hpp"
#include "alpos/network.hpp"
#include "alpos/normalizer.hpp"
#include "alpos/training.hpp"

using namespace alpos;

TEST_SUITE("neural") {

TEST_CASE("parameter counts match the closed form") {
    CHECK(ModelArch{18, 120, 7, 2}.parameter_count() == 104162);
    CHECK(ModelArch{2, 120, 7, 18}.parameter_count() == 104178);

    // property: closed form equals the materialized weight sizes
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> dims(1, 24);
    for (int trial = 0; trial < 30; ++trial) {
        const ModelArch arch{dims(rng), dims(rng), dims(rng) % 6, dims(rng)};
        const Model model = init_model(arch, trial);
        std::int64_t total = 0;
        for (std::size_t l = 0; l < model.weights.size(); ++l)
            total += model.weights[l].size() + model.biases[l].size();
        CHECK(total == arch.parameter_count());
    }
}

TEST_CASE("init is deterministic and fan-in bounded") {
    const ModelArch arch{6, 16, 3, 2};
    const Model a = init_model(arch, 9);
    const Model b = init_model(arch, 9);
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        CHECK((a.weights[l].array() == b.weights[l].array()).all());
        CHECK(a.biases[l].isZero());
        const double bound = 1.0 / std::sqrt(double(a.weights[l].cols()));
        CHECK(a.weights[l].cwiseAbs().maxCoeff() <= bound);
    }
    const Model c = init_model(arch, 10);
    CHECK_FALSE((a.weights[0].array() == c.weights[0].array()).all());
}

TEST_CASE("forward basics") {
    const ModelArch arch{18, 120, 7, 2};
    Model model = init_model(arch, 1);
    SUBCASE("zero weights give zero output") {
        for (auto& w : model.weights) w.setZero();
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(18);
        const Eigen::VectorXd y = forward(model, ones);
        CHECK(y.isZero());
    }
    SUBCASE("finite in, finite out") {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(-10, 10);
        Eigen::VectorXd x(18);
        for (int i = 0; i < 18; ++i) x(i) = u(rng);
        const Eigen::VectorXd y = forward(model, x);
        CHECK(y.allFinite());
    }
    SUBCASE("dimension mismatch") {
        const Eigen::VectorXd wrong = Eigen::VectorXd::Zero(7);
        CHECK_THROWS_AS(forward(model, wrong), DimensionMismatch);
    }
}

TEST_CASE("mse loss") {
    Eigen::MatrixXd p(2, 1), t(2, 1);
    p << 0, 0;
    t << 3, 4;
    CHECK(loss_mse(p, p) == 0.0);
    CHECK(loss_mse(p, t) == doctest::Approx(25.0));
    Eigen::MatrixXd p2(2, 2), t2(2, 2);
    p2 << 0, 1, 0, 1;
    t2 << 3, 1, 4, 1;
    CHECK(loss_mse(p2, t2) == doctest::Approx(12.5));
    CHECK_THROWS_AS(loss_mse(p, t2), DimensionMismatch);
}

TEST_CASE("gradient check on random small models") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> in_d(2, 6), width(4, 12), hid(0, 4),
        out_d(1, 3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const ModelArch arch{in_d(rng), width(rng), hid(rng), out_d(rng)};
        const Model model = init_model(arch, 100 + trial);
        Eigen::VectorXd x(arch.input_dim), t(arch.output_dim);
        for (int i = 0; i < x.size(); ++i) x(i) = gauss(rng);
        for (int i = 0; i < t.size(); ++i) t(i) = gauss(rng);
        CHECK(finite_difference_check(model, x, t, trial) < 1e-4);
    }
}

TEST_CASE("gradient of output bias in the zero-weight linear region") {
    const ModelArch arch{4, 8, 2, 2};
    Model model = init_model(arch, 3);
    for (auto& w : model.weights) w.setZero();
    const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(4, 1);
    Eigen::MatrixXd t(2, 1);
    t << 1.0, -2.0;
    const Gradients g = backward(model, x, t);
    // output = 0, dL/db = 2(0 - t)
    CHECK(g.biases.back()(0) == doctest::Approx(-2.0));
    CHECK(g.biases.back()(1) == doctest::Approx(4.0));
}

TEST_CASE("training fits a linear map and is deterministic") {
    // y = 2x on [-1, 1]
    const int n = 100;
    Eigen::MatrixXd x(1, n), y(1, n);
    for (int i = 0; i < n; ++i) {
        x(0, i) = -1.0 + 2.0 * i / (n - 1);
        y(0, i) = 2.0 * x(0, i);
    }
    const ModelArch arch{1, 16, 2, 1};
    TrainConfig tc;
    tc.batch_size = 16;
    tc.seed = 21;
    const TrainResult r1 =
        train(init_model(arch, 8), x, y, tc, 1e-2, 200);
    CHECK(r1.loss_history.back() < 1e-3);
    // loss strictly decreases over the first 10 epochs
    for (int e = 1; e < 10; ++e)
        CHECK(r1.loss_history[e] < r1.loss_history[e - 1]);

    const TrainResult r2 =
        train(init_model(arch, 8), x, y, tc, 1e-2, 200);
    for (std::size_t l = 0; l < r1.model.weights.size(); ++l)
        CHECK((r1.model.weights[l].array() == r2.model.weights[l].array()).all());
}

TEST_CASE("one optimizer step per epoch with full-batch training") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(2, 8);
    Eigen::MatrixXd y = Eigen::MatrixXd::Random(1, 8);
    const ModelArch arch{2, 4, 0, 1};
    TrainConfig tc;
    tc.batch_size = 8;
    tc.seed = 1;
    const TrainResult r = train(init_model(arch, 2), x, y, tc, 1e-3, 1);
    CHECK(r.loss_history.size() == 1);
    // a single Adam step moves every weight by at most lr per entry
    const Model fresh = init_model(arch, 2);
    const double max_move =
        (r.model.weights[0] - fresh.weights[0]).cwiseAbs().maxCoeff();
    CHECK(max_move <= 1e-3 + 1e-12);
    CHECK(max_move > 0.0);
}

TEST_CASE("training errors") {
    const ModelArch arch{2, 4, 0, 1};
    TrainConfig tc;
    const Eigen::MatrixXd empty(2, 0);
    CHECK_THROWS_AS(
        train(init_model(arch, 1), empty, Eigen::MatrixXd(1, 0), tc, 1e-3, 1),
        InvalidConfig);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 4);
    CHECK_THROWS_AS(
        train(init_model(arch, 1), x, Eigen::MatrixXd::Random(1, 4), tc, 1e-3, 1),
        DimensionMismatch);
    // divergence: absurd learning rate on a steep target
    Eigen::MatrixXd bx = Eigen::MatrixXd::Random(2, 8) * 1e3;
    Eigen::MatrixXd by = Eigen::MatrixXd::Random(1, 8) * 1e9;
    CHECK_THROWS_AS(train(init_model(arch, 1), bx, by, tc, 1e200, 50),
                    TrainingDiverged);
}

TEST_CASE("normalizer") {
    const Scene scene = build_scene(SceneConfig{});
    const Dataset pool = generate_pool(scene, 100, 31);
    const Normalizer norm = fit_normalizer(pool, scene);

    SUBCASE("center maps to origin") {
        Eigen::MatrixXd p(2, 1);
        p << 30.0, 60.0;
        CHECK(norm.normalize_positions(p).isZero(1e-12));
    }
    SUBCASE("round trip") {
        const Eigen::MatrixXd f = feature_matrix(pool);
        const Eigen::MatrixXd back =
            norm.denormalize_features(norm.normalize_features(f));
        CHECK((back - f).cwiseAbs().maxCoeff() < 1e-9);
        const Eigen::MatrixXd p = position_matrix(pool);
        const Eigen::MatrixXd pback =
            norm.denormalize_positions(norm.normalize_positions(p));
        CHECK((pback - p).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("constant column floors the std") {
        Dataset flat = pool;
        for (Sample& s : flat.samples) s.features(0) = -70.0;
        const Normalizer nf = fit_normalizer(flat, scene);
        CHECK(nf.feature_stds(0) == 1e-6);
        CHECK(nf.normalize_features(feature_matrix(flat)).row(0).isZero());
    }
    SUBCASE("empty dataset") {
        CHECK_THROWS_AS(fit_normalizer(Dataset{}, scene), InvalidConfig);
    }
}

TEST_CASE("checkpoint round-trip and corruption detection") {
    namespace fs = std::filesystem;
    const Scene scene = build_scene(SceneConfig{});
    const Dataset pool = generate_pool(scene, 60, 13);
    const Normalizer norm = fit_normalizer(pool, scene);
    const ModelArch arch{18, 24, 3, 2};
    const Model model = init_model(arch, 77);
    const std::string path =
        (fs::temp_directory_path() / "alpos_ckpt_test.bin").string();

    save_checkpoint(model, norm, path);
    const auto [loaded, lnorm] = load_checkpoint(path);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd x(18);
        for (int i = 0; i < 18; ++i) x(i) = gauss(rng);
        const Eigen::VectorXd a = forward(model, x);
        const Eigen::VectorXd b = forward(loaded, x);
        CHECK((a.array() == b.array()).all());
    }
    CHECK((lnorm.feature_means.array() == norm.feature_means.array()).all());

    SUBCASE("truncated file") {
        std::error_code ec;
        fs::resize_file(path, fs::file_size(path) / 2, ec);
        REQUIRE_FALSE(ec);
        CHECK_THROWS_AS(load_checkpoint(path), CorruptFile);
    }
    SUBCASE("flipped byte") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(64);
        char c;
        f.seekg(64);
        f.get(c);
        f.seekp(64);
        f.put(static_cast<char>(c ^ 0x5a));
        f.close();
        CHECK_THROWS_AS(load_checkpoint(path), CorruptFile);
    }
    SUBCASE("wrong version tag") {
        // version lives at offset 8; flipping it also breaks the checksum,
        // so rebuild the checksum by hand
        std::ifstream in(path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        in.close();
        bytes[8] = 2;
        // recompute crc over all but the last 4 bytes
        const auto crc = crc32(
            0UL, reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(bytes.size() - 4));
        for (int i = 0; i < 4; ++i)
            bytes[bytes.size() - 4 + i] = static_cast<char>(crc >> (8 * i));
        std::ofstream out(path, std::ios::binary);
        out << bytes;
        out.close();
        CHECK_THROWS_AS(load_checkpoint(path), VersionMismatch);
    }
    std::remove(path.c_str());
}

}  // TEST_SUITE

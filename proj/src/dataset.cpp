#include "alpos/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "alpos/errors.hpp"
#include "alpos/rng.hpp"

namespace alpos {

Eigen::VectorXd path_gain_vector(const Scene& scene,
                                 const ShadowAndLosFields& fields,
                                 const Vec2& position,
                                 std::vector<bool>* los_out) {
    if (!scene.contains(position))
        throw OutOfRange("path_gain_vector: position outside the scene");
    const int n = scene.n_bs();
    Eigen::VectorXd pg(n);
    if (los_out) los_out->assign(n, false);
    const double dz = scene.config.bs_height_m - scene.config.ue_height_m;
    for (int b = 0; b < n; ++b) {
        const Vec3& bs = scene.bs_positions[b];
        const double d2d =
            std::hypot(position.x() - bs.x(), position.y() - bs.y());
        const double d3d = std::max(1.0, std::hypot(d2d, dz));
        const bool los = fields.is_los(b, position);
        pg(b) = fields.shadow_db(b, position, los) -
                path_loss(scene, d3d, los);
        if (los_out) (*los_out)[b] = los;
    }
    return pg;
}

Dataset generate_pool(const Scene& scene, int n_points, std::uint64_t seed) {
    if (n_points < 1) throw InvalidConfig("generate_pool: n_points must be >= 1");
    std::uint64_t s = seed;
    const std::uint64_t field_seed = splitmix64(s);
    const std::uint64_t position_seed = splitmix64(s);
    ShadowAndLosFields fields(scene, field_seed);

    Rng rng = make_rng(position_seed);
    std::uniform_real_distribution<double> ux(0.0, scene.config.width_m);
    std::uniform_real_distribution<double> uy(0.0, scene.config.length_m);

    Dataset out;
    out.bs_ids.resize(scene.n_bs());
    std::iota(out.bs_ids.begin(), out.bs_ids.end(), 0);
    out.samples.reserve(n_points);
    for (int k = 0; k < n_points; ++k) {
        Sample sample;
        const double x = ux(rng);
        const double y = uy(rng);
        sample.position = Vec2(x, y);
        sample.features =
            path_gain_vector(scene, fields, sample.position, &sample.los_flags);
        out.samples.push_back(std::move(sample));
    }
    return out;
}

Dataset subsample_bs(const Dataset& dataset, const std::vector<int>& keep) {
    if (keep.empty()) throw InvalidConfig("subsample_bs: empty keep list");
    std::vector<int> columns;
    columns.reserve(keep.size());
    int previous = -1;
    for (int id : keep) {
        if (id <= previous)
            throw InvalidConfig("subsample_bs: keep must be strictly increasing");
        previous = id;
        auto it = std::find(dataset.bs_ids.begin(), dataset.bs_ids.end(), id);
        if (it == dataset.bs_ids.end())
            throw OutOfRange("subsample_bs: unknown bs index " +
                             std::to_string(id));
        columns.push_back(static_cast<int>(it - dataset.bs_ids.begin()));
    }

    Dataset out;
    out.bs_ids = keep;
    out.samples.reserve(dataset.samples.size());
    for (const Sample& s : dataset.samples) {
        Sample r;
        r.position = s.position;
        r.features.resize(static_cast<int>(columns.size()));
        r.los_flags.reserve(columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            r.features(static_cast<int>(j)) = s.features(columns[j]);
            r.los_flags.push_back(s.los_flags.empty() ? false
                                                      : s.los_flags[columns[j]]);
        }
        out.samples.push_back(std::move(r));
    }
    return out;
}

Dataset take_samples(const Dataset& source, const std::vector<int>& indices) {
    Dataset out;
    out.bs_ids = source.bs_ids;
    out.samples.reserve(indices.size());
    for (int i : indices) out.samples.push_back(source.samples[i]);
    return out;
}

PoolPartition partition_pool(const Dataset& pool, int n, std::uint64_t seed) {
    if (n < 0) throw InvalidConfig("partition_pool: n must be >= 0");
    if (2 * static_cast<std::int64_t>(n) > pool.size())
        throw InvalidConfig("partition_pool: pool too small for 2n samples");

    std::vector<int> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng = make_rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    PoolPartition part;
    part.d1_indices.assign(order.begin(), order.begin() + n);
    part.candidate_indices.assign(order.begin() + n, order.begin() + 2 * n);
    part.rest_indices.assign(order.begin() + 2 * n, order.end());
    part.d1 = take_samples(pool, part.d1_indices);
    part.candidates = take_samples(pool, part.candidate_indices);
    part.rest = take_samples(pool, part.rest_indices);
    return part;
}

void write_dataset(const Dataset& dataset, const Scene& scene,
                   std::uint64_t seed, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const SceneConfig& c = scene.config;
    out.precision(17);
    out << "# alpos dataset v1\n";
    out << "# scene width_m=" << c.width_m << " length_m=" << c.length_m
        << " height_m=" << c.height_m << " bs_spacing_m=" << c.bs_spacing_m
        << " bs_height_m=" << c.bs_height_m << " ue_height_m=" << c.ue_height_m
        << " carrier_ghz=" << c.carrier_ghz
        << " clutter_density=" << c.clutter_density
        << " clutter_height_m=" << c.clutter_height_m
        << " clutter_size_m=" << c.clutter_size_m
        << " shadow_corr_dist_m=" << c.shadow_corr_dist_m
        << " sigma_sf_los_db=" << c.sigma_sf_los_db
        << " sigma_sf_nlos_db=" << c.sigma_sf_nlos_db << "\n";
    out << "# seed " << seed << "\n";
    out << "# bs_ids";
    for (int id : dataset.bs_ids) out << ' ' << id;
    out << "\n";
    for (const Sample& s : dataset.samples) {
        out << s.position.x() << ' ' << s.position.y();
        for (int j = 0; j < s.features.size(); ++j) out << ' ' << s.features(j);
        for (std::size_t j = 0; j < s.los_flags.size(); ++j)
            out << ' ' << (s.los_flags[j] ? 1 : 0);
        out << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Dataset out;
    std::string line;
    bool saw_bs_ids = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hdr(line.substr(1));
            std::string tag;
            hdr >> tag;
            if (tag == "bs_ids") {
                int id;
                while (hdr >> id) out.bs_ids.push_back(id);
                saw_bs_ids = true;
            }
            continue;
        }
        if (!saw_bs_ids) throw CorruptFile(path + ": missing bs_ids header");
        const int nf = static_cast<int>(out.bs_ids.size());
        std::istringstream row(line);
        Sample s;
        double x, y;
        if (!(row >> x >> y)) throw CorruptFile(path + ": malformed record");
        s.position = Vec2(x, y);
        s.features.resize(nf);
        for (int j = 0; j < nf; ++j)
            if (!(row >> s.features(j)))
                throw CorruptFile(path + ": truncated feature row");
        s.los_flags.resize(nf);
        for (int j = 0; j < nf; ++j) {
            int f;
            if (!(row >> f)) throw CorruptFile(path + ": truncated los row");
            s.los_flags[j] = (f != 0);
        }
        out.samples.push_back(std::move(s));
    }
    if (!saw_bs_ids) throw CorruptFile(path + ": missing header");
    return out;
}

}  // namespace alpos

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "alpos/fields.hpp"
#include "alpos/scene.hpp"

namespace alpos {

struct Sample {
    Vec2 position;                // horizontal coordinate, meters
    Eigen::VectorXd features;     // path gain per retained BS, dB
    std::vector<bool> los_flags;  // diagnostic only, never model input
};

struct Dataset {
    std::vector<Sample> samples;
    std::vector<int> bs_ids;  // retained BS columns, strictly increasing

    int size() const { return static_cast<int>(samples.size()); }
    int n_features() const { return static_cast<int>(bs_ids.size()); }
};

// Path gain vector at one position: per BS, shadow fading minus path loss,
// using the frozen LoS state of the field realization. los_out, when
// non-null, receives the per-BS LoS flags.
Eigen::VectorXd path_gain_vector(const Scene& scene,
                                 const ShadowAndLosFields& fields,
                                 const Vec2& position,
                                 std::vector<bool>* los_out = nullptr);

// n_points i.i.d. uniform positions over the rectangle, fingerprinted
// against a single field realization derived from seed.
Dataset generate_pool(const Scene& scene, int n_points, std::uint64_t seed);

// Column projection onto the kept BS indices.
Dataset subsample_bs(const Dataset& dataset, const std::vector<int>& keep);

struct PoolPartition {
    Dataset d1;
    Dataset candidates;
    Dataset rest;
    std::vector<int> d1_indices;          // into the pool
    std::vector<int> candidate_indices;   // into the pool
    std::vector<int> rest_indices;        // into the pool
};

// Disjoint split of the pool into |d1| = |candidates| = n and the remainder.
PoolPartition partition_pool(const Dataset& pool, int n, std::uint64_t seed);

Dataset take_samples(const Dataset& source, const std::vector<int>& indices);

// Delimited-text dataset file: '#'-prefixed header (scene config echo, seed,
// bs_ids), then per sample: x y pg[0..n-1] los[0..n-1].
void write_dataset(const Dataset& dataset, const Scene& scene,
                   std::uint64_t seed, const std::string& path);
Dataset read_dataset(const std::string& path);

}  // namespace alpos

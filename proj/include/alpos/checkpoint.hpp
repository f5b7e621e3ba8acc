#pragma once

#include <string>
#include <utility>

#include "alpos/network.hpp"
#include "alpos/normalizer.hpp"

namespace alpos {

// Binary checkpoint: magic + version header, arch dims, normalizer vectors,
// little-endian f64 weights, trailing CRC32.
void save_checkpoint(const Model& model, const Normalizer& normalizer,
                     const std::string& path);
std::pair<Model, Normalizer> load_checkpoint(const std::string& path);

}  // namespace alpos

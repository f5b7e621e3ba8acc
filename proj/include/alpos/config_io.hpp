#pragma once

#include <string>

#include "alpos/protocol.hpp"

namespace alpos {

// key=value config with [scene], [train], [experiment] sections. Unknown
// keys are rejected; missing keys keep the documented defaults.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<string>");

std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace alpos

#pragma once

#include <string>

#include "alpos/protocol.hpp"

namespace alpos {

// Self-contained SVG: mean Q(0.9) after additional training versus BS
// count, one polyline per (strategy, test set), with legend and axes.
std::string render_summary_svg(const SummaryTable& summary);

void emit_plot(const SummaryTable& summary, const std::string& out_path);

}  // namespace alpos

#pragma once

#include <vector>

#include "alpos/errors.hpp"

namespace alpos {

// Nearest-rank quantile: ascending sort, element at rank ceil(q * n).
double q_quantile(std::vector<double> errors, double q);

// Relative improvement G = 1 - after / initial.
double gain(double q90_initial, double q90_after);

// k = round(x_percent / 100 * n), half away from zero.
int selection_count(double x_percent, int n);

}  // namespace alpos

#include "alpos/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace alpos {

double q_quantile(std::vector<double> errors, double q) {
    if (errors.empty()) throw InvalidConfig("q_quantile: empty input");
    if (!(q > 0.0 && q <= 1.0)) throw OutOfRange("q_quantile: q not in (0,1]");
    std::sort(errors.begin(), errors.end());
    const auto n = static_cast<double>(errors.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n));
    rank = std::max<std::size_t>(rank, 1);
    return errors[rank - 1];
}

double gain(double q90_initial, double q90_after) {
    if (!(q90_initial > 0.0))
        throw InvalidConfig("gain: initial error must be > 0");
    return 1.0 - q90_after / q90_initial;
}

int selection_count(double x_percent, int n) {
    return static_cast<int>(std::llround(x_percent / 100.0 * n));
}

}  // namespace alpos

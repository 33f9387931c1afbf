// Cross-source summary metrics.
#pragma once

#include <stdexcept>
#include <vector>

namespace aoi {

// Jain's fairness index of per-source average ages: (sum x)^2 / (N sum x^2),
// in [1/N, 1], equal to 1 when all values coincide.
inline double jfi(const std::vector<double>& means) {
    if (means.empty())
        throw std::invalid_argument("jfi requires at least one value");
    double s = 0.0, s2 = 0.0;
    for (double x : means) {
        if (!(x > 0.0))
            throw std::invalid_argument("jfi requires positive values");
        s += x;
        s2 += x * x;
    }
    return s * s / (static_cast<double>(means.size()) * s2);
}

inline double sum_aoi(const std::vector<double>& means) {
    double s = 0.0;
    for (double x : means) s += x;
    return s;
}

}  // namespace aoi

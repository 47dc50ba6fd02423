#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "warpwatch/errors.hpp"

namespace warpwatch {

/// (v - min) / (max - min), with the maximum pinned to exactly 1 so the map
/// is idempotent in floating point.
inline std::vector<double> minmax_scaled(std::span<const double> v) {
    if (v.empty()) throw EmptySeriesError("cannot min-max normalize an empty series");
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double min = *lo;
    const double max = *hi;
    if (!(max > min)) throw DegenerateRangeError("cannot min-max normalize a constant series");
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] == max ? 1.0 : (v[k] - min) / (max - min);
    return out;
}

}  // namespace warpwatch

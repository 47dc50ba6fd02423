#pragma once

#include <cstdio>
#include <string>

namespace warpwatch {

/// Every number written by the tools goes through here: 9 significant digits.
inline std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace warpwatch

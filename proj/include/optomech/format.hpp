#pragma once

#include <cstdio>
#include <cstdlib>

namespace optomech {

/// Rounds to 9 significant digits so JSON/CSV emission is stable text.
inline double sig9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return std::strtod(buf, nullptr);
}

}  // namespace optomech

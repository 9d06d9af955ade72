#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace dmn {

/// Shortest round-trip decimal form of `v`, independent of the global locale.
/// Infinities print as "inf" / "-inf"; NaN prints as "nan" and should never
/// reach an output stream.
inline std::string format_number(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace dmn

#pragma once

#include <cstdio>
#include <string>

namespace logring {

/// Decimal formatting used by all CSV output: 17 significant digits,
/// enough to round-trip any double bit-exactly.
inline std::string fmt_g17(double v) {
    if (v == 0.0) return "0";  // canonicalize negative zero
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace logring

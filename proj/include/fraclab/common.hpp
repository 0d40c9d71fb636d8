#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace fraclab {

// All precondition failures throw std::invalid_argument with a stable message;
// the CLI prints these verbatim and exits nonzero.
inline void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

// Deterministic double formatting shared by every writer (CSV, JSON payloads).
// %.17g round-trips doubles exactly and never depends on locale or time.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_double(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

inline bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace fraclab

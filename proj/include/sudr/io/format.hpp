#pragma once

#include <charconv>
#include <string>

namespace sudr {

/// Shortest round-trippable text for a double; identical input gives
/// identical bytes, which the determinism tests rely on.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace sudr

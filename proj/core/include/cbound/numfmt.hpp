#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace cbound {

/// Shortest decimal string that parses back to the same double.
inline std::string shortest(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

} // namespace cbound

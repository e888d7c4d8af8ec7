// CSV helpers. Floating values are rendered with 12 significant digits so
// golden outputs stay byte-stable across runs and platforms.
#pragma once

#include <cstdio>
#include <string>

namespace ammfork {

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string format_value(bool v) { return v ? "1" : "0"; }

inline std::string format_value(std::size_t v) { return std::to_string(v); }

inline std::string format_value(const std::string& v) { return v; }

template <typename... Fields>
std::string csv_row(const Fields&... fields) {
    std::string row;
    bool first = true;
    ((row += (first ? (first = false, "") : ","), row += format_value(fields)), ...);
    row += '\n';
    return row;
}

}  // namespace ammfork

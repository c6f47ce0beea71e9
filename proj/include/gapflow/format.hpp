// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// CSV emission with a reproducibility contract: every floating-point value is
// written in its shortest round-trip decimal form, rows end in '\n', and no
// field ever contains a comma (vector-valued fields are space-joined).

#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

namespace gapflow {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Space-joined list, for vector payloads inside a single CSV field.
inline std::string format_point(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += format_double(xs[i]);
    }
    return out;
}

/// Writes one comma-separated row.  Fields must be comma-free; empty strings
/// are the convention for non-applicable cells.
inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << fields[i];
    }
    os << '\n';
}

}  // namespace gapflow

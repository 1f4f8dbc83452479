#pragma once

// =============================================================================
// omflow - tiny CSV helpers
// =============================================================================
// Numbers are written with 9 significant digits (%.9g).  Header cells are
// quoted only when they contain a comma or quote; that is the entire dialect
// both the writers and the round-trip readers speak.
// =============================================================================

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "omflow/errors.hpp"

namespace omflow {

/// Formats a double with 9 significant digits, the library-wide CSV precision.
[[nodiscard]] inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

/// The value that a CSV reader recovers from a written double: format then
/// parse back.  Summary metrics are computed on these values so a consumer
/// recomputing them from the file reproduces them exactly.
[[nodiscard]] inline double csv_roundtrip(double x) {
    return std::strtod(format_number(x).c_str(), nullptr);
}

/// Quotes a header cell if it contains a comma or a quote.
[[nodiscard]] inline std::string csv_escape(const std::string& cell) {
    if (cell.find(',') == std::string::npos &&
        cell.find('"') == std::string::npos) {
        return cell;
    }
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Splits one CSV line, honouring the quoting rules of csv_escape().
[[nodiscard]] inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

}  // namespace omflow

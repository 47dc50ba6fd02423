#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "warpwatch/errors.hpp"

namespace warpwatch::csv {

/// One parsed record plus the 1-based line it came from.
struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// Splits one line on commas. Double-quoted fields may contain commas and
/// doubled quotes; a trailing CR is dropped so CRLF files read cleanly.
inline std::vector<std::string> split_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    cur.push_back('"');
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

/// Header plus data rows. Blank lines are skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    /// Column index by exact header name, or nullopt.
    std::optional<std::size_t> column(std::string_view name) const {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == name) return k;
        }
        return std::nullopt;
    }

    std::size_t require(std::string_view name) const {
        if (auto c = column(name)) return *c;
        throw MissingColumnError("missing column '" + std::string(name) + "'");
    }
};

inline Table parse(std::istream& in) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (view.empty() || view == "\r") continue;
        auto fields = split_line(view);
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
        } else {
            t.rows.push_back(Row{lineno, std::move(fields)});
        }
    }
    if (!have_header) throw ParseError("empty CSV input: no header line");
    return t;
}

inline Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse(in);
}

inline Table parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

/// Decimal parse of a whole field; rejects trailing junk.
inline double parse_double(std::string_view text, std::size_t line) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw ParseError("malformed number '" + std::string(text) + "'", line);
    }
    return v;
}

/// Requires exactly `expected` header names, in order.
inline void expect_header(const Table& t, const std::vector<std::string>& expected) {
    if (t.header != expected) {
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        throw ParseError("unexpected header, expected '" + want + "'", 1);
    }
}

inline void expect_width(const Row& r, std::size_t width) {
    if (r.fields.size() != width) {
        throw ParseError("expected " + std::to_string(width) + " fields, got " +
                             std::to_string(r.fields.size()),
                         r.line);
    }
}

}  // namespace warpwatch::csv

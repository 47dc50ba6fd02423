#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "warpwatch/csv.hpp"
#include "warpwatch/date.hpp"
#include "warpwatch/errors.hpp"
#include "warpwatch/format.hpp"
#include "warpwatch/normalize.hpp"

namespace warpwatch {

/// Contiguous daily series: value k belongs to start() + k days.
/// Non-empty and finite by construction; immutable afterwards.
class DateIndexedSeries {
public:
    DateIndexedSeries(Date start, std::vector<double> values)
        : start_(start), values_(std::move(values)) {
        if (values_.empty()) throw EmptySeriesError("series must contain at least one value");
        for (std::size_t k = 0; k < values_.size(); ++k) {
            if (!std::isfinite(values_[k])) {
                throw NonFiniteValueError("non-finite value on " + (start_ + static_cast<std::int64_t>(k)).iso());
            }
        }
    }

    Date start() const noexcept { return start_; }
    Date last() const noexcept { return start_ + static_cast<std::int64_t>(values_.size()) - 1; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    Date date_at(std::size_t k) const noexcept { return start_ + static_cast<std::int64_t>(k); }

    bool contains(Date d) const noexcept { return d >= start_ && d <= last(); }
    double at(Date d) const {
        if (!contains(d)) throw RangeError("date " + d.iso() + " outside series range");
        return values_[static_cast<std::size_t>(d - start_)];
    }

    /// Sub-range [from, to], both inclusive and inside the series.
    DateIndexedSeries slice(Date from, Date to) const {
        if (from < start_ || to > last() || to < from) {
            throw RangeError("slice " + from.iso() + ".." + to.iso() + " outside series range");
        }
        const auto b = values_.begin() + (from - start_);
        return DateIndexedSeries(from, std::vector<double>(b, b + (to - from) + 1));
    }

    bool operator==(const DateIndexedSeries&) const = default;

private:
    Date start_;
    std::vector<double> values_;
};

struct DatedValue {
    Date date;
    double value;
};

/// Builds a series from unordered (date, value) rows, insisting on one
/// unbroken daily run.
inline DateIndexedSeries validate_contiguous(std::vector<DatedValue> rows) {
    if (rows.empty()) throw EmptySeriesError("no rows to build a series from");
    std::stable_sort(rows.begin(), rows.end(),
                     [](const DatedValue& a, const DatedValue& b) { return a.date < b.date; });
    std::vector<std::string> missing;
    std::vector<double> values;
    values.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!std::isfinite(rows[k].value)) {
            throw NonFiniteValueError("non-finite value on " + rows[k].date.iso());
        }
        if (k > 0) {
            const auto step = rows[k].date - rows[k - 1].date;
            if (step == 0) throw DuplicateDateError("duplicate date " + rows[k].date.iso());
            for (std::int64_t g = 1; g < step; ++g) missing.push_back((rows[k - 1].date + g).iso());
        }
        values.push_back(rows[k].value);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw GapError("missing dates: " + list, std::move(missing));
    }
    return DateIndexedSeries(rows.front().date, std::move(values));
}

/// Affine map onto [0,1]: min -> 0, max -> 1.
inline DateIndexedSeries minmax_normalize(const DateIndexedSeries& s) {
    return DateIndexedSeries(s.start(), minmax_scaled(s.values()));
}

/// Trims both series to the intersection of their date ranges.
inline std::pair<DateIndexedSeries, DateIndexedSeries> align_ranges(const DateIndexedSeries& a,
                                                                    const DateIndexedSeries& b) {
    const Date from = std::max(a.start(), b.start());
    const Date to = std::min(a.last(), b.last());
    if (to < from) {
        throw NoOverlapError("date ranges " + a.start().iso() + ".." + a.last().iso() + " and " +
                             b.start().iso() + ".." + b.last().iso() + " do not overlap");
    }
    return {a.slice(from, to), b.slice(from, to)};
}

// CSV `date,value`.

inline DateIndexedSeries series_from_table(const csv::Table& t) {
    csv::expect_header(t, {"date", "value"});
    std::vector<DatedValue> rows;
    rows.reserve(t.rows.size());
    for (const auto& r : t.rows) {
        csv::expect_width(r, 2);
        Date d;
        try {
            d = Date::parse(r.fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), r.line);
        }
        rows.push_back({d, csv::parse_double(r.fields[1], r.line)});
    }
    return validate_contiguous(std::move(rows));
}

inline DateIndexedSeries read_series_csv(const std::string& path) {
    return series_from_table(csv::read_file(path));
}

inline void write_series_csv(std::ostream& out, const DateIndexedSeries& s) {
    out << "date,value\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out << s.date_at(k).iso() << ',' << format_number(s[k]) << '\n';
    }
}

inline void write_series_csv(const std::string& path, const DateIndexedSeries& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    write_series_csv(out, s);
}

}  // namespace warpwatch

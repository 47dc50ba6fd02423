#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "warpwatch/csv.hpp"
#include "warpwatch/date.hpp"
#include "warpwatch/errors.hpp"
#include "warpwatch/timeseries.hpp"

namespace warpwatch::cases {

/// One patient row of the line list, reduced to the fields the pipeline uses.
struct LineListRecord {
    std::string region_res;
    std::string province_res;
    Date date_rep_conf;
    std::optional<Date> date_rep_rem;
};

/// Inclusive daily range.
struct DateRange {
    Date first;
    Date last;

    DateRange(Date from, Date to) : first(from), last(to) {
        if (to < from) throw RangeError("date range ends (" + to.iso() + ") before it starts (" + from.iso() + ")");
    }
    std::size_t days() const { return static_cast<std::size_t>(last - first) + 1; }
    bool contains(Date d) const { return d >= first && d <= last; }
};

enum class CaseKind { Confirmed, Removed, Active };

struct CaseSeries {
    CaseKind kind;
    DateIndexedSeries series;
};

/// Retains rows whose RegionRes and ProvinceRes equal the filter exactly.
/// Blank fields never match. Dates are parsed only on retained rows; rows are
/// numbered from 1 at the first data row.
inline std::vector<LineListRecord> linelist_from_table(const csv::Table& t, const std::string& region,
                                                       const std::string& province) {
    const std::size_t c_region = t.require("RegionRes");
    const std::size_t c_province = t.require("ProvinceRes");
    const std::size_t c_conf = t.require("DateRepConf");
    const std::size_t c_rem = t.require("DateRepRem");

    std::vector<LineListRecord> out;
    std::size_t row_no = 0;
    for (const auto& r : t.rows) {
        ++row_no;
        if (r.fields.size() != t.header.size()) {
            throw ParseError("row " + std::to_string(row_no) + ": expected " + std::to_string(t.header.size()) +
                                 " fields, got " + std::to_string(r.fields.size()),
                             r.line);
        }
        const std::string& reg = r.fields[c_region];
        const std::string& prov = r.fields[c_province];
        if (reg.empty() || prov.empty() || reg != region || prov != province) continue;
        LineListRecord rec;
        try {
            rec.date_rep_conf = Date::parse(r.fields[c_conf]);
            if (!r.fields[c_rem].empty()) rec.date_rep_rem = Date::parse(r.fields[c_rem]);
        } catch (const ParseError& e) {
            throw ParseError("row " + std::to_string(row_no) + ": " + e.what(), r.line);
        }
        rec.region_res = reg;
        rec.province_res = prov;
        out.push_back(std::move(rec));
    }
    return out;
}

inline std::vector<LineListRecord> load_linelist(const std::string& path, const std::string& region,
                                                 const std::string& province) {
    return linelist_from_table(csv::read_file(path), region, province);
}

namespace detail {

template <typename DateOf>
CaseSeries count_by(const std::vector<LineListRecord>& records, const DateRange& range, CaseKind kind,
                    DateOf date_of) {
    std::vector<double> counts(range.days(), 0.0);
    for (const auto& rec : records) {
        const std::optional<Date> d = date_of(rec);
        if (d && range.contains(*d)) counts[static_cast<std::size_t>(*d - range.first)] += 1.0;
    }
    return {kind, DateIndexedSeries(range.first, std::move(counts))};
}

}  // namespace detail

/// New confirmations per day, zero-filled over the range.
inline CaseSeries daily_confirmed(const std::vector<LineListRecord>& records, const DateRange& range) {
    return detail::count_by(records, range, CaseKind::Confirmed,
                            [](const LineListRecord& r) { return std::optional<Date>(r.date_rep_conf); });
}

/// Recoveries plus deaths per day; rows without a removal date count nowhere.
inline CaseSeries daily_removed(const std::vector<LineListRecord>& records, const DateRange& range) {
    return detail::count_by(records, range, CaseKind::Removed,
                            [](const LineListRecord& r) { return r.date_rep_rem; });
}

struct ClampEvent {
    Date date;
    double raw_value;  // the negative value before clamping
};

struct ActiveCases {
    CaseSeries active;
    std::vector<ClampEvent> clamp_log;
};

/// A_t = A_{t-1} + C_t - R_t from A_{-1} = 0, clamped at zero. Each clamped
/// day is logged with its raw negative value.
inline ActiveCases active_cases(const CaseSeries& confirmed, const CaseSeries& removed) {
    const auto& c = confirmed.series;
    const auto& r = removed.series;
    if (c.start() != r.start() || c.size() != r.size()) {
        throw RangeMismatchError("confirmed (" + c.start().iso() + ".." + c.last().iso() + ") and removed (" +
                                 r.start().iso() + ".." + r.last().iso() + ") cover different ranges");
    }
    std::vector<double> a(c.size());
    std::vector<ClampEvent> log;
    double prev = 0.0;
    for (std::size_t t = 0; t < c.size(); ++t) {
        double v = prev + c[t] - r[t];
        if (v < 0.0) {
            log.push_back({c.date_at(t), v});
            v = 0.0;
        }
        a[t] = v;
        prev = v;
    }
    return {CaseSeries{CaseKind::Active, DateIndexedSeries(c.start(), std::move(a))}, std::move(log)};
}

}  // namespace warpwatch::cases

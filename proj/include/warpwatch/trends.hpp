#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "warpwatch/csv.hpp"
#include "warpwatch/date.hpp"
#include "warpwatch/errors.hpp"
#include "warpwatch/timeseries.hpp"

namespace warpwatch::trends {

inline constexpr std::size_t kSegmentDays = 30;
inline constexpr double kMaxRsv = 100.0;

namespace detail {

inline void check_rsv(double v, const std::string& where) {
    if (!(v >= 0.0 && v <= kMaxRsv)) {
        throw RangeError("RSV value " + format_number(v) + " outside [0,100] " + where);
    }
}

}  // namespace detail

/// One 30-day export of daily relative search volume for a keyword.
struct DailySegment {
    std::string keyword;
    Date start;
    std::vector<double> values;

    DailySegment(std::string kw, Date start_date, std::vector<double> vals)
        : keyword(std::move(kw)), start(start_date), values(std::move(vals)) {
        if (values.size() != kSegmentDays) {
            throw ParseError("segment " + keyword + "@" + start.iso() + " has " +
                             std::to_string(values.size()) + " days, expected 30");
        }
        for (double v : values) detail::check_rsv(v, "in segment " + keyword + "@" + start.iso());
    }

    Date last() const { return start + static_cast<std::int64_t>(values.size()) - 1; }
    bool covers(Date d) const { return d >= start && d <= last(); }
    double at(Date d) const { return values[static_cast<std::size_t>(d - start)]; }
};

/// Whole-period weekly RSV reference; week k starts at week_starts[k].
struct WeeklySeries {
    std::string keyword;
    std::vector<Date> week_starts;
    std::vector<double> values;

    WeeklySeries(std::string kw, std::vector<Date> starts, std::vector<double> vals)
        : keyword(std::move(kw)), week_starts(std::move(starts)), values(std::move(vals)) {
        if (week_starts.empty() || week_starts.size() != values.size()) {
            throw ParseError("weekly series for " + keyword + " is empty or ragged");
        }
        for (std::size_t k = 1; k < week_starts.size(); ++k) {
            if (week_starts[k] - week_starts[k - 1] != 7) {
                throw ParseError("weekly series for " + keyword + ": week " + week_starts[k].iso() +
                                 " is not 7 days after " + week_starts[k - 1].iso());
            }
        }
        for (double v : values) detail::check_rsv(v, "in weekly series " + keyword);
    }

    /// Index of the week containing d, if the reference covers it.
    std::optional<std::size_t> week_of(Date d) const {
        if (d < week_starts.front()) return std::nullopt;
        const auto k = static_cast<std::size_t>((d - week_starts.front()) / 7);
        if (k >= week_starts.size()) return std::nullopt;
        return k;
    }
};

// ---------------------------------------------------------------------------
// File loading

/// Reads `keyword,segment_start,date,value`. Rows of one segment share
/// (keyword, segment_start) and must run day by day from segment_start.
inline std::vector<DailySegment> segments_from_table(const csv::Table& t) {
    csv::expect_header(t, {"keyword", "segment_start", "date", "value"});
    struct Pending {
        std::string keyword;
        Date start;
        std::size_t first_line;
        std::vector<double> values;
    };
    std::vector<Pending> pending;
    std::map<std::pair<std::string, std::int64_t>, std::size_t> index;

    for (const auto& r : t.rows) {
        csv::expect_width(r, 4);
        Date start;
        Date day;
        try {
            start = Date::parse(r.fields[1]);
            day = Date::parse(r.fields[2]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), r.line);
        }
        const double v = csv::parse_double(r.fields[3], r.line);
        if (!(v >= 0.0 && v <= kMaxRsv)) {
            throw RangeError("RSV value " + r.fields[3] + " outside [0,100] (line " +
                             std::to_string(r.line) + ")");
        }
        const auto key = std::make_pair(r.fields[0], start.epoch_day());
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, pending.size()).first;
            pending.push_back({r.fields[0], start, r.line, {}});
        }
        auto& seg = pending[it->second];
        const Date expected = seg.start + static_cast<std::int64_t>(seg.values.size());
        if (day != expected) {
            throw ParseError("segment " + seg.keyword + "@" + seg.start.iso() + ": expected date " +
                                 expected.iso() + ", got " + day.iso(),
                             r.line);
        }
        if (seg.values.size() == kSegmentDays) {
            throw ParseError("segment " + seg.keyword + "@" + seg.start.iso() + " exceeds 30 days", r.line);
        }
        seg.values.push_back(v);
    }

    std::vector<DailySegment> out;
    out.reserve(pending.size());
    for (auto& p : pending) {
        if (p.values.size() != kSegmentDays) {
            throw ParseError("segment " + p.keyword + "@" + p.start.iso() + " has " +
                                 std::to_string(p.values.size()) + " days, expected 30",
                             p.first_line);
        }
        out.emplace_back(std::move(p.keyword), p.start, std::move(p.values));
    }
    return out;
}

inline std::vector<DailySegment> load_segments(const std::string& path) {
    return segments_from_table(csv::read_file(path));
}

/// Reads `keyword,week_start,value`, one WeeklySeries per keyword.
inline std::map<std::string, WeeklySeries> weekly_from_table(const csv::Table& t) {
    csv::expect_header(t, {"keyword", "week_start", "value"});
    std::map<std::string, std::vector<std::pair<Date, double>>> rows;
    for (const auto& r : t.rows) {
        csv::expect_width(r, 3);
        Date d;
        try {
            d = Date::parse(r.fields[1]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), r.line);
        }
        const double v = csv::parse_double(r.fields[2], r.line);
        if (!(v >= 0.0 && v <= kMaxRsv)) {
            throw RangeError("RSV value " + r.fields[2] + " outside [0,100] (line " +
                             std::to_string(r.line) + ")");
        }
        rows[r.fields[0]].emplace_back(d, v);
    }
    std::map<std::string, WeeklySeries> out;
    for (auto& [kw, list] : rows) {
        std::stable_sort(list.begin(), list.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Date> starts;
        std::vector<double> values;
        for (const auto& [d, v] : list) {
            starts.push_back(d);
            values.push_back(v);
        }
        out.emplace(kw, WeeklySeries(kw, std::move(starts), std::move(values)));
    }
    return out;
}

inline std::map<std::string, WeeklySeries> load_weekly(const std::string& path) {
    return weekly_from_table(csv::read_file(path));
}

/// Segments bucketed by keyword, each bucket in start-date order.
inline std::map<std::string, std::vector<DailySegment>> group_by_keyword(std::vector<DailySegment> segments) {
    std::map<std::string, std::vector<DailySegment>> out;
    for (auto& s : segments) out[s.keyword].push_back(std::move(s));
    for (auto& [kw, list] : out) {
        std::stable_sort(list.begin(), list.end(),
                         [](const DailySegment& a, const DailySegment& b) { return a.start < b.start; });
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rescaling Daily Data

/// Calibrates every segment against the weekly reference: each day is
/// multiplied by weekly(w) / mean(segment days in w) for its week w (factor 0
/// when that mean is 0). Days supplied by several segments take the mean of
/// their calibrated values.
inline DateIndexedSeries rescale_daily(std::vector<DailySegment> segments, const WeeklySeries& weekly) {
    if (segments.empty()) throw CoverageError("no segments to rescale");
    // Canonical order makes the overlap sums independent of input order.
    std::sort(segments.begin(), segments.end(), [](const DailySegment& a, const DailySegment& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.values < b.values;
    });

    Date first = segments.front().start;
    Date last = segments.front().last();
    for (const auto& s : segments) {
        first = std::min(first, s.start);
        last = std::max(last, s.last());
    }
    const auto days = static_cast<std::size_t>(last - first) + 1;
    std::vector<double> sum(days, 0.0);
    std::vector<std::size_t> count(days, 0);

    for (const auto& seg : segments) {
        // Per-week sums over the days this segment actually has.
        std::map<std::size_t, std::pair<double, std::size_t>> week_totals;
        std::vector<std::size_t> week_of_day(seg.values.size());
        for (std::size_t k = 0; k < seg.values.size(); ++k) {
            const Date d = seg.start + static_cast<std::int64_t>(k);
            const auto w = weekly.week_of(d);
            if (!w) {
                throw CoverageError("weekly reference for " + weekly.keyword + " does not cover " + d.iso());
            }
            week_of_day[k] = *w;
            auto& [total, n] = week_totals[*w];
            total += seg.values[k];
            ++n;
        }
        std::map<std::size_t, double> factor;
        for (const auto& [w, tn] : week_totals) {
            const double mean = tn.first / static_cast<double>(tn.second);
            factor[w] = mean == 0.0 ? 0.0 : weekly.values[w] / mean;
        }
        for (std::size_t k = 0; k < seg.values.size(); ++k) {
            const auto pos = static_cast<std::size_t>(seg.start - first) + k;
            sum[pos] += seg.values[k] * factor[week_of_day[k]];
            ++count[pos];
        }
    }

    std::vector<double> out(days);
    for (std::size_t k = 0; k < days; ++k) {
        if (count[k] == 0) {
            throw CoverageError("no segment covers " + (first + static_cast<std::int64_t>(k)).iso());
        }
        out[k] = sum[k] / static_cast<double>(count[k]);
    }
    return DateIndexedSeries(first, std::move(out));
}

// ---------------------------------------------------------------------------
// Merged Search Volume

/// Chains segments forward from the earliest one. Each later segment is
/// scaled by the mean of merged/segment over overlap days where the segment
/// value is positive (1 when there is no such day); only its days past the
/// current end are appended. The result is finally scaled to peak at 100.
inline DateIndexedSeries msv_merge(std::vector<DailySegment> segments) {
    if (segments.empty()) throw CoverageError("no segments to merge");
    std::stable_sort(segments.begin(), segments.end(),
                     [](const DailySegment& a, const DailySegment& b) { return a.start < b.start; });

    const Date first = segments.front().start;
    std::vector<double> merged(segments.front().values);
    auto merged_last = [&] { return first + static_cast<std::int64_t>(merged.size()) - 1; };

    for (std::size_t s = 1; s < segments.size(); ++s) {
        const auto& seg = segments[s];
        const Date overlap_end = std::min(merged_last(), seg.last());
        if (seg.start > overlap_end) {
            throw NoOverlapError("segment " + seg.keyword + "@" + seg.start.iso() +
                                 " does not overlap the series merged so far (ends " +
                                 merged_last().iso() + ")");
        }
        double ratio_sum = 0.0;
        std::size_t ratio_n = 0;
        for (Date d = seg.start; d <= overlap_end; d = d + 1) {
            const double sv = seg.at(d);
            if (sv > 0.0) {
                ratio_sum += merged[static_cast<std::size_t>(d - first)] / sv;
                ++ratio_n;
            }
        }
        const double factor = ratio_n == 0 ? 1.0 : ratio_sum / static_cast<double>(ratio_n);
        for (Date d = overlap_end + 1; d <= seg.last(); d = d + 1) merged.push_back(seg.at(d) * factor);
    }

    const double peak = *std::max_element(merged.begin(), merged.end());
    if (peak > 0.0) {
        for (double& v : merged) v = v == peak ? kMaxRsv : v * (kMaxRsv / peak);
    }
    return DateIndexedSeries(first, std::move(merged));
}

// ---------------------------------------------------------------------------

enum class Method { RescalingDaily, Msv };

/// Reconstructs one daily series per keyword. `weekly` is only read by
/// the rescaling method.
inline std::map<std::string, DateIndexedSeries> reconstruct_panel(
    std::vector<DailySegment> segments, const std::map<std::string, WeeklySeries>* weekly, Method method) {
    std::map<std::string, DateIndexedSeries> out;
    for (auto& [kw, segs] : group_by_keyword(std::move(segments))) {
        if (method == Method::RescalingDaily) {
            if (!weekly) throw UsageError("rescaling needs a weekly reference");
            const auto it = weekly->find(kw);
            if (it == weekly->end()) throw CoverageError("no weekly reference for keyword " + kw);
            out.emplace(kw, rescale_daily(std::move(segs), it->second));
        } else {
            out.emplace(kw, msv_merge(std::move(segs)));
        }
    }
    return out;
}

}  // namespace warpwatch::trends

#pragma once

// Builds sweep inputs from the synthetic raw files, running the real
// preprocessing and case derivation on them.

#include "warpwatch/cases.hpp"
#include "warpwatch/network.hpp"
#include "warpwatch/sweep.hpp"
#include "warpwatch/testkit.hpp"
#include "warpwatch/trends.hpp"

namespace warpwatch::fixture {

inline sweep::SweepInputs synthetic_sweep_inputs(const testkit::SyntheticScenario& sc, std::size_t keywords) {
    const auto raw = testkit::synth_inputs(sc, keywords);

    std::vector<trends::DailySegment> segments;
    {
        // Regroup the flat rows into 30-day segments.
        std::size_t k = 0;
        while (k < raw.segments.size()) {
            std::vector<double> values;
            const auto& head = raw.segments[k];
            while (k < raw.segments.size() && raw.segments[k].keyword == head.keyword &&
                   raw.segments[k].segment_start == head.segment_start) {
                values.push_back(raw.segments[k].value);
                ++k;
            }
            segments.emplace_back(head.keyword, head.segment_start, std::move(values));
        }
    }
    std::map<std::string, trends::WeeklySeries> weekly;
    {
        std::map<std::string, std::pair<std::vector<Date>, std::vector<double>>> rows;
        for (const auto& w : raw.weekly) {
            rows[w.keyword].first.push_back(w.week_start);
            rows[w.keyword].second.push_back(w.value);
        }
        for (auto& [kw, r] : rows) weekly.emplace(kw, trends::WeeklySeries(kw, r.first, r.second));
    }

    sweep::SweepInputs in;
    in.panels.emplace(sweep::Preprocess::RescalingDaily,
                      network::KeywordPanel::from_map(
                          trends::reconstruct_panel(segments, &weekly, trends::Method::RescalingDaily)));
    in.panels.emplace(sweep::Preprocess::Msv, network::KeywordPanel::from_map(
                                                  trends::reconstruct_panel(segments, nullptr, trends::Method::Msv)));

    std::vector<cases::LineListRecord> records;
    for (const auto& r : raw.linelist) records.push_back({"NCR", "NCR", r.confirmed, r.removed});
    const cases::DateRange range(testkit::kSynthStart,
                                 testkit::kSynthStart + static_cast<std::int64_t>(sc.length) - 1);
    const auto confirmed = cases::daily_confirmed(records, range);
    const auto removed = cases::daily_removed(records, range);
    in.cases.emplace(sweep::CaseType::Confirmed, confirmed.series);
    in.cases.emplace(sweep::CaseType::Active, cases::active_cases(confirmed, removed).active.series);
    return in;
}

}  // namespace warpwatch::fixture

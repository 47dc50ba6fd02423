#include <gtest/gtest.h>

#include <chrono>
#include <set>

#include "sweep_fixture.hpp"
#include "warpwatch/sweep.hpp"

using namespace warpwatch;
using namespace warpwatch::sweep;

namespace {

const Date kStart = Date::parse("2020-03-16");

const SweepInputs& small_inputs() {
    static const SweepInputs in = [] {
        testkit::SyntheticScenario sc;
        sc.length = 120;
        sc.noise_amplitude = 0.05;
        sc.seed = 3;
        return fixture::synthetic_sweep_inputs(sc, 6);
    }();
    return in;
}

SweepResult scored(SweepConfig c, double score) {
    SweepResult r;
    r.config = c;
    r.dtw_score = score;
    r.path_length = 10;
    return r;
}

}  // namespace

TEST(EnumerateConfigs, FullLatticeIs320DistinctInOrder) {
    const auto configs = enumerate_configs();
    EXPECT_EQ(configs.size(), 320u);
    EXPECT_EQ(SweepDomains{}.size(), 2u * 2 * 4 * 2 * 2 * 5);
    std::set<std::tuple<MetricKind, Preprocess, double, std::size_t, CaseType, std::size_t>> seen;
    for (const auto& c : configs) seen.insert(c.key());
    EXPECT_EQ(seen.size(), 320u);
    EXPECT_TRUE(std::is_sorted(configs.begin(), configs.end()));
    EXPECT_EQ(configs.front(), (SweepConfig{MetricKind::Density, Preprocess::RescalingDaily, 0.4, 15,
                                            CaseType::Confirmed, 7}));
    EXPECT_EQ(configs.back(), (SweepConfig{MetricKind::Clustering, Preprocess::Msv, 0.8, 30, CaseType::Active, 50}));
}

TEST(RunSweep, MetricEqualToNormalizedCasesScoresZero) {
    // Two keywords identical on days 0..24 and unrelated afterwards: with a
    // 5-day window the density is 1 while the window lies inside the shared
    // stretch and 0 once it holds enough unrelated days.
    std::vector<double> a(50), b(50);
    for (std::size_t k = 0; k < 50; ++k) {
        a[k] = static_cast<double>((k * 7) % 11);
        b[k] = k < 25 ? a[k] : 5.0;  // constant tail -> dCor 0
    }
    SweepInputs in;
    in.panels.emplace(Preprocess::RescalingDaily,
                      network::KeywordPanel({"a", "b"}, {DateIndexedSeries(kStart, a), DateIndexedSeries(kStart, b)}));
    const auto density = network::metric_series(in.panels.at(Preprocess::RescalingDaily),
                                                MetricKind::Density, 0.5, 5);
    ASSERT_EQ(density.values().front(), 1.0);
    ASSERT_EQ(density.values().back(), 0.0);
    in.cases.emplace(CaseType::Confirmed, density);

    const auto results = run_sweep(in, {SweepConfig{MetricKind::Density, Preprocess::RescalingDaily, 0.5, 5,
                                                    CaseType::Confirmed, 7}});
    ASSERT_EQ(results.size(), 1u);
    ASSERT_TRUE(results[0].ok()) << results[0].message;
    EXPECT_EQ(results[0].dtw_score, 0.0);
    EXPECT_EQ(results[0].path_length, density.size());
}

TEST(RunSweep, FailuresAreIsolatedPerConfig) {
    // 20 days of data: 15-day windows work, 30-day windows cannot.
    std::vector<double> a(20), b(20);
    for (std::size_t k = 0; k < 20; ++k) {
        a[k] = static_cast<double>(k % 5);
        b[k] = static_cast<double>((k * 3) % 7);
    }
    std::vector<double> cases(20);
    for (std::size_t k = 0; k < 20; ++k) cases[k] = static_cast<double>(k * k);
    SweepInputs in;
    in.panels.emplace(Preprocess::RescalingDaily,
                      network::KeywordPanel({"a", "b"}, {DateIndexedSeries(kStart, a), DateIndexedSeries(kStart, b)}));
    in.cases.emplace(CaseType::Confirmed, DateIndexedSeries(kStart, cases));
    in.cases.emplace(CaseType::Active, DateIndexedSeries(kStart, std::vector<double>(20, 3.0)));

    SweepDomains d;
    d.preprocesses = {Preprocess::RescalingDaily};
    const auto results = run_sweep(in, enumerate_configs(d), 4);
    ASSERT_EQ(results.size(), 160u);
    std::size_t ok = 0;
    for (const auto& r : results) {
        if (r.config.window == 30) {
            EXPECT_EQ(r.status, Status::InsufficientHistory);
        } else if (r.config.case_type == CaseType::Active) {
            EXPECT_EQ(r.status, Status::DegenerateRange);  // constant active series
        } else {
            EXPECT_TRUE(r.ok()) << r.message;
            ++ok;
        }
    }
    EXPECT_EQ(ok, 40u);
}

TEST(RunSweep, DeterministicAcrossThreadCounts) {
    SweepDomains d;
    d.thresholds = {0.5, 0.8};
    d.radii = {7, 50};
    const auto configs = enumerate_configs(d);
    const auto one = run_sweep(small_inputs(), configs, 1);
    const auto many = run_sweep(small_inputs(), configs, 8);
    ASSERT_EQ(one.size(), many.size());
    for (std::size_t k = 0; k < one.size(); ++k) {
        ASSERT_EQ(one[k].config, many[k].config);
        ASSERT_EQ(one[k].status, many[k].status);
        ASSERT_EQ(one[k].dtw_score, many[k].dtw_score);
        ASSERT_EQ(one[k].path_length, many[k].path_length);
    }
}

TEST(RunSweep, ScoresReproduceAndNestInRadius) {
    SweepDomains d;
    d.thresholds = {0.4, 0.6};
    const auto configs = enumerate_configs(d);
    const auto results = run_sweep(small_inputs(), configs, 2);
    for (std::size_t k = 0; k < results.size(); ++k) {
        const auto& r = results[k];
        ASSERT_TRUE(r.ok()) << r.message;
        ASSERT_GE(r.dtw_score, 0.0);
        // radius varies fastest: the next result differs only in radius
        if (k + 1 < results.size() && r.config.radius < results[k + 1].config.radius) {
            ASSERT_GE(r.dtw_score, results[k + 1].dtw_score);
        }
    }
    // Independent recomputation of one config.
    const auto& r = results[7];
    const auto& in = small_inputs();
    const auto metric = network::metric_series(in.panels.at(r.config.preprocess), r.config.metric, r.config.threshold,
                                               r.config.window);
    const auto norm = minmax_normalize(in.cases.at(r.config.case_type));
    const auto [x, y] = align_ranges(norm, metric);
    EXPECT_EQ(dtw(x.values(), y.values(), BandSpec::sakoe_chiba(r.config.radius)).distance, r.dtw_score);
}

TEST(SummarizeParameter, LevelMeans) {
    std::vector<SweepResult> all_equal;
    for (const auto& c : enumerate_configs()) all_equal.push_back(scored(c, 4.25));
    for (auto p : all_parameters()) {
        const auto rep = summarize_parameter(all_equal, p);
        for (const auto& l : rep.levels) EXPECT_EQ(l.mean_dtw, 4.25);
        ASSERT_TRUE(rep.test);
        EXPECT_EQ(rep.test->h, 0.0);
        EXPECT_EQ(rep.test->p, 1.0);
        EXPECT_FALSE(rep.significant());
    }

    std::vector<SweepResult> split;
    for (const auto& c : enumerate_configs()) {
        const double v = c.window == 15 ? (c.radius % 2 ? 0.5 : 1.5) : (c.radius % 2 ? 2.5 : 3.5);
        split.push_back(scored(c, v));
    }
    const auto rep = summarize_parameter(split, Parameter::Window);
    ASSERT_EQ(rep.levels.size(), 2u);
    EXPECT_EQ(rep.levels[0].level, "15");
    EXPECT_DOUBLE_EQ(rep.levels[0].mean_dtw, 0.5 * 0.4 + 1.5 * 0.6);  // radii 7,15 odd; 20,30,50 even
    EXPECT_DOUBLE_EQ(rep.levels[1].mean_dtw, 2.5 * 0.4 + 3.5 * 0.6);
    EXPECT_TRUE(rep.significant());
}

TEST(SummarizeParameter, LevelsInDomainOrderAndFailuresExcluded) {
    std::vector<SweepResult> results;
    for (const auto& c : enumerate_configs()) {
        auto r = scored(c, static_cast<double>(c.radius));
        if (c.radius == 20) r.status = Status::Failed;
        results.push_back(r);
    }
    const auto rep = summarize_parameter(results, Parameter::Radius);
    ASSERT_EQ(rep.levels.size(), 4u);
    EXPECT_EQ(rep.levels[0].level, "7");
    EXPECT_EQ(rep.levels[3].level, "50");
    EXPECT_EQ(rep.levels[1].mean_dtw, 15.0);
    EXPECT_EQ(rep.levels[1].count, 64u);
}

TEST(SummarizeParameter, RadiusMeansDecreaseOnLaggedData) {
    SweepDomains d;
    d.thresholds = {0.5};
    const auto results = run_sweep(small_inputs(), enumerate_configs(d), 2);
    const auto rep = summarize_parameter(results, Parameter::Radius);
    for (std::size_t k = 1; k < rep.levels.size(); ++k) EXPECT_GE(rep.levels[k - 1].mean_dtw, rep.levels[k].mean_dtw);
}

TEST(OptimalConfigs, MinimumPerGroupWithLexicographicTieBreak) {
    std::vector<SweepResult> results;
    for (const auto& c : enumerate_configs()) results.push_back(scored(c, 10.0));
    // Dominant configs per group.
    const SweepConfig nd_conf{MetricKind::Density, Preprocess::RescalingDaily, 0.8, 15, CaseType::Confirmed, 50};
    const SweepConfig cc_act{MetricKind::Clustering, Preprocess::RescalingDaily, 0.4, 15, CaseType::Active, 50};
    for (auto& r : results) {
        if (r.config == nd_conf) r.dtw_score = 1.0;
        if (r.config == cc_act) r.dtw_score = 2.0;
    }
    // Ties at the minimum in (density, active): first lexicographically wins.
    const SweepConfig tie_a{MetricKind::Density, Preprocess::Msv, 0.5, 30, CaseType::Active, 20};
    const SweepConfig tie_b{MetricKind::Density, Preprocess::RescalingDaily, 0.6, 15, CaseType::Active, 50};
    for (auto& r : results) {
        if (r.config == tie_a || r.config == tie_b) r.dtw_score = 3.0;
    }
    std::reverse(results.begin(), results.end());

    const auto rows = optimal_configs(results);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].metric, MetricKind::Density);
    EXPECT_EQ(rows[0].case_type, CaseType::Confirmed);
    EXPECT_EQ(rows[0].best->config, nd_conf);
    EXPECT_EQ(rows[1].case_type, CaseType::Active);
    EXPECT_EQ(rows[1].best->config, tie_b);
    EXPECT_EQ(rows[2].metric, MetricKind::Clustering);
    EXPECT_EQ(rows[3].best->config, cc_act);
}

TEST(DomainsValidation, RejectsBadValues) {
    SweepDomains d;
    d.thresholds = {0.0};
    EXPECT_THROW(d.validate_and_canonicalize(), UsageError);
    SweepDomains e;
    e.radii.clear();
    EXPECT_THROW(e.validate_and_canonicalize(), UsageError);
    SweepDomains f;
    f.thresholds = {0.8, 0.4, 0.4};
    f.validate_and_canonicalize();
    EXPECT_EQ(f.thresholds, (std::vector<double>{0.4, 0.8}));
}

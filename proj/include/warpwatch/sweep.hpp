#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "warpwatch/dtw.hpp"
#include "warpwatch/errors.hpp"
#include "warpwatch/format.hpp"
#include "warpwatch/network.hpp"
#include "warpwatch/stats.hpp"
#include "warpwatch/timeseries.hpp"

namespace warpwatch::sweep {

using network::MetricKind;

enum class Preprocess { RescalingDaily, Msv };
enum class CaseType { Confirmed, Active };

inline std::string label(MetricKind m) { return m == MetricKind::Density ? "density" : "clustering"; }
inline std::string label(Preprocess p) { return p == Preprocess::RescalingDaily ? "rescale" : "msv"; }
inline std::string label(CaseType c) { return c == CaseType::Confirmed ? "confirmed" : "active"; }

/// One point of the parameter lattice.
struct SweepConfig {
    MetricKind metric = MetricKind::Density;
    Preprocess preprocess = Preprocess::RescalingDaily;
    double threshold = 0.4;
    std::size_t window = 15;
    CaseType case_type = CaseType::Confirmed;
    std::size_t radius = 7;

    auto key() const { return std::tuple(metric, preprocess, threshold, window, case_type, radius); }
    bool operator==(const SweepConfig& o) const { return key() == o.key(); }
    /// Lexicographic over the fields in declaration order.
    bool operator<(const SweepConfig& o) const { return key() < o.key(); }
};

/// The value set of every parameter. Defaults are the full 320-point lattice.
struct SweepDomains {
    std::vector<MetricKind> metrics{MetricKind::Density, MetricKind::Clustering};
    std::vector<Preprocess> preprocesses{Preprocess::RescalingDaily, Preprocess::Msv};
    std::vector<double> thresholds{0.4, 0.5, 0.6, 0.8};
    std::vector<std::size_t> windows{15, 30};
    std::vector<CaseType> case_types{CaseType::Confirmed, CaseType::Active};
    std::vector<std::size_t> radii{7, 15, 20, 30, 50};

    std::size_t size() const {
        return metrics.size() * preprocesses.size() * thresholds.size() * windows.size() * case_types.size() *
               radii.size();
    }

    /// Sorted, de-duplicated, non-empty, thresholds in (0,1], windows >= 2.
    void validate_and_canonicalize() {
        auto canon = [](auto& v, const char* name) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            if (v.empty()) throw UsageError(std::string("parameter domain '") + name + "' is empty");
        };
        canon(metrics, "metric");
        canon(preprocesses, "preprocess");
        canon(thresholds, "threshold");
        canon(windows, "window");
        canon(case_types, "case_type");
        canon(radii, "radius");
        for (double t : thresholds) {
            if (!(t > 0.0 && t <= 1.0)) throw UsageError("threshold " + format_number(t) + " outside (0,1]");
        }
        for (std::size_t w : windows) {
            if (w < 2) throw UsageError("correlation window must be at least 2 days");
        }
    }
};

/// Cartesian product in lexicographic order (radius varies fastest).
inline std::vector<SweepConfig> enumerate_configs(const SweepDomains& d = {}) {
    std::vector<SweepConfig> out;
    out.reserve(d.size());
    for (auto m : d.metrics)
        for (auto p : d.preprocesses)
            for (double t : d.thresholds)
                for (std::size_t w : d.windows)
                    for (auto c : d.case_types)
                        for (std::size_t r : d.radii) out.push_back({m, p, t, w, c, r});
    return out;
}

enum class Status { Ok, BandInfeasible, NoOverlap, DegenerateRange, InsufficientHistory, Failed };

inline std::string label(Status s) {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::BandInfeasible: return "band_infeasible";
        case Status::NoOverlap: return "no_overlap";
        case Status::DegenerateRange: return "degenerate_range";
        case Status::InsufficientHistory: return "insufficient_history";
        case Status::Failed: return "failed";
    }
    return "failed";
}

struct SweepResult {
    SweepConfig config;
    Status status = Status::Ok;
    double dtw_score = 0.0;       // meaningful only when ok()
    std::size_t path_length = 0;  // meaningful only when ok()
    std::string message;

    bool ok() const noexcept { return status == Status::Ok; }
};

/// Preprocessed keyword panels and daily case series feeding the sweep.
struct SweepInputs {
    std::map<Preprocess, network::KeywordPanel> panels;
    std::map<CaseType, DateIndexedSeries> cases;
};

namespace detail {

/// Runs fn(k) for k in [0, count) on up to `threads` workers. Each index is
/// handled by exactly one worker; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count && !failed; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

template <typename F>
std::pair<Status, std::string> classify(F&& f) {
    try {
        f();
        return {Status::Ok, {}};
    } catch (const BandInfeasibleError& e) {
        return {Status::BandInfeasible, e.what()};
    } catch (const NoOverlapError& e) {
        return {Status::NoOverlap, e.what()};
    } catch (const DegenerateRangeError& e) {
        return {Status::DegenerateRange, e.what()};
    } catch (const InsufficientHistoryError& e) {
        return {Status::InsufficientHistory, e.what()};
    } catch (const Error& e) {
        return {Status::Failed, e.what()};
    }
}

}  // namespace detail

/// Scores every config: the case series is min-max normalized over its full
/// range, both series are trimmed to their common dates, and banded DTW runs
/// with the case series as x and the network metric as y. Per-config failures
/// become result entries. Output order follows `configs`, whatever `threads`.
inline std::vector<SweepResult> run_sweep(const SweepInputs& inputs, const std::vector<SweepConfig>& configs,
                                          unsigned threads = 1) {
    // Rolling correlation matrices are shared by every metric and threshold.
    using MatrixKey = std::pair<Preprocess, std::size_t>;
    std::vector<MatrixKey> matrix_keys;
    for (const auto& c : configs) {
        const MatrixKey k{c.preprocess, c.window};
        if (std::find(matrix_keys.begin(), matrix_keys.end(), k) == matrix_keys.end()) matrix_keys.push_back(k);
    }
    std::sort(matrix_keys.begin(), matrix_keys.end());

    struct Rolling {
        std::vector<Matrix> matrices;
        Date first;
        std::exception_ptr error;
    };
    std::vector<Rolling> rolling(matrix_keys.size());
    detail::parallel_for(matrix_keys.size(), threads, [&](std::size_t k) {
        const auto [pre, window] = matrix_keys[k];
        auto& slot = rolling[k];
        try {
            const auto it = inputs.panels.find(pre);
            if (it == inputs.panels.end()) throw Error("no " + label(pre) + " panel supplied");
            slot.matrices = network::rolling_correlations(it->second, window);
            slot.first = it->second.start() + static_cast<std::int64_t>(window) - 1;
        } catch (const Error&) {
            slot.error = std::current_exception();
        }
    });

    std::map<CaseType, std::pair<std::optional<DateIndexedSeries>, std::exception_ptr>> normalized;
    for (const auto& c : configs) {
        if (normalized.count(c.case_type)) continue;
        auto& slot = normalized[c.case_type];
        try {
            const auto it = inputs.cases.find(c.case_type);
            if (it == inputs.cases.end()) throw Error("no " + label(c.case_type) + " case series supplied");
            slot.first = minmax_normalize(it->second);
        } catch (const Error&) {
            slot.second = std::current_exception();
        }
    }

    std::vector<SweepResult> results(configs.size());
    detail::parallel_for(configs.size(), threads, [&](std::size_t k) {
        const auto& cfg = configs[k];
        auto& res = results[k];
        res.config = cfg;
        std::tie(res.status, res.message) = detail::classify([&] {
            const auto mk = std::lower_bound(matrix_keys.begin(), matrix_keys.end(),
                                             MatrixKey{cfg.preprocess, cfg.window}) - matrix_keys.begin();
            const auto& roll = rolling[static_cast<std::size_t>(mk)];
            if (roll.error) std::rethrow_exception(roll.error);
            const auto& [case_norm, case_error] = normalized.at(cfg.case_type);
            if (case_error) std::rethrow_exception(case_error);

            const auto metric = network::metric_series_from(roll.matrices, roll.first, cfg.metric, cfg.threshold);
            const auto [x, y] = align_ranges(*case_norm, metric);
            const auto r = dtw(x.values(), y.values(), BandSpec::sakoe_chiba(cfg.radius), false);
            res.dtw_score = r.distance;
            res.path_length = r.path.size();
        });
    });
    return results;
}

// ---------------------------------------------------------------------------
// Reporting

enum class Parameter { Metric, Preprocess, Threshold, Window, CaseType, Radius };

inline const std::vector<Parameter>& all_parameters() {
    static const std::vector<Parameter> p{Parameter::Metric,  Parameter::Preprocess, Parameter::Threshold,
                                          Parameter::Window,  Parameter::CaseType,   Parameter::Radius};
    return p;
}

inline std::string label(Parameter p) {
    switch (p) {
        case Parameter::Metric: return "metric";
        case Parameter::Preprocess: return "preprocess";
        case Parameter::Threshold: return "threshold";
        case Parameter::Window: return "window";
        case Parameter::CaseType: return "case_type";
        case Parameter::Radius: return "radius";
    }
    return "";
}

/// Level label of `p` within a config, as written in reports.
inline std::string level_of(const SweepConfig& c, Parameter p) {
    switch (p) {
        case Parameter::Metric: return label(c.metric);
        case Parameter::Preprocess: return label(c.preprocess);
        case Parameter::Threshold: return format_number(c.threshold);
        case Parameter::Window: return std::to_string(c.window);
        case Parameter::CaseType: return label(c.case_type);
        case Parameter::Radius: return std::to_string(c.radius);
    }
    return "";
}

/// Sort key placing levels in domain order rather than label order.
inline double level_rank(const SweepConfig& c, Parameter p) {
    switch (p) {
        case Parameter::Metric: return static_cast<double>(c.metric);
        case Parameter::Preprocess: return static_cast<double>(c.preprocess);
        case Parameter::Threshold: return c.threshold;
        case Parameter::Window: return static_cast<double>(c.window);
        case Parameter::CaseType: return static_cast<double>(c.case_type);
        case Parameter::Radius: return static_cast<double>(c.radius);
    }
    return 0.0;
}

struct LevelSummary {
    std::string level;
    std::size_t count = 0;
    double mean_dtw = 0.0;
};

inline constexpr double kAlpha = 0.05;

struct ParameterReport {
    Parameter parameter;
    std::vector<LevelSummary> levels;
    /// Absent when fewer than two levels (or three scores) are available.
    std::optional<stats::KruskalWallis> test;
    bool significant() const { return test && test->p < kAlpha; }
};

/// Marginal per-level means and Kruskal-Wallis test over successful results.
/// Scores are gathered in lexicographic config order so the report does not
/// depend on how the sweep was scheduled.
inline ParameterReport summarize_parameter(std::vector<SweepResult> results, Parameter p) {
    std::stable_sort(results.begin(), results.end(),
                     [](const SweepResult& a, const SweepResult& b) { return a.config < b.config; });
    std::map<double, std::pair<std::string, std::vector<double>>> groups;
    for (const auto& r : results) {
        if (!r.ok()) continue;
        auto& g = groups[level_rank(r.config, p)];
        g.first = level_of(r.config, p);
        g.second.push_back(r.dtw_score);
    }
    ParameterReport rep{p, {}, std::nullopt};
    std::vector<std::vector<double>> samples;
    std::size_t total = 0;
    for (auto& [rank, g] : groups) {
        double sum = 0.0;
        for (double v : g.second) sum += v;
        rep.levels.push_back({g.first, g.second.size(), sum / static_cast<double>(g.second.size())});
        total += g.second.size();
        samples.push_back(std::move(g.second));
    }
    if (samples.size() >= 2 && total >= 3) rep.test = stats::kruskal_wallis(samples);
    return rep;
}

struct OptimalRow {
    MetricKind metric;
    CaseType case_type;
    std::optional<SweepResult> best;
};

/// Minimum-score successful result per (metric, case type), first in
/// lexicographic config order on ties. Rows follow the metric then case-type
/// order of the configs present.
inline std::vector<OptimalRow> optimal_configs(std::vector<SweepResult> results) {
    std::stable_sort(results.begin(), results.end(),
                     [](const SweepResult& a, const SweepResult& b) { return a.config < b.config; });
    std::map<std::pair<MetricKind, CaseType>, std::optional<SweepResult>> best;
    for (const auto& r : results) {
        auto& slot = best[{r.config.metric, r.config.case_type}];
        if (!r.ok()) continue;
        if (!slot || r.dtw_score < slot->dtw_score) slot = r;
    }
    std::vector<OptimalRow> rows;
    for (auto& [key, b] : best) rows.push_back({key.first, key.second, std::move(b)});
    return rows;
}

}  // namespace warpwatch::sweep

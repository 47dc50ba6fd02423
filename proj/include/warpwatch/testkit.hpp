#pragma once

// Independent oracles and deterministic synthetic data. Nothing here calls
// into the DTW engine or the graph-metric code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "warpwatch/date.hpp"
#include "warpwatch/dtw.hpp"
#include "warpwatch/errors.hpp"
#include "warpwatch/network.hpp"
#include "warpwatch/timeseries.hpp"

namespace warpwatch::testkit {

/// 64-bit LCG: state = state * 6364136223846793005 + 1442695040888963407,
/// output is the top 53 bits of the new state scaled to [0,1).
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}

    double next_unit() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi].
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<double>(hi - lo + 1);
        auto v = lo + static_cast<std::int64_t>(next_unit() * span);
        return v > hi ? hi : v;
    }

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// DTW oracle

inline constexpr std::size_t kBruteForceMaxLength = 8;

/// Minimum summed |x_i - y_j| over every boundary/monotone/continuous path
/// inside the band, by exhaustive enumeration. nullopt when no path fits.
inline std::optional<double> brute_force_dtw(std::span<const double> x, std::span<const double> y,
                                             std::optional<std::size_t> radius) {
    if (x.empty() || y.empty()) throw EmptySeriesError("brute force DTW needs non-empty series");
    if (x.size() > kBruteForceMaxLength || y.size() > kBruteForceMaxLength) {
        throw TooLargeError("brute force DTW is limited to series of length <= 8");
    }
    const std::size_t n = x.size();
    const std::size_t m = y.size();
    auto inside = [&](std::size_t i, std::size_t j) {
        if (!radius) return true;
        return (i > j ? i - j : j - i) <= *radius;
    };

    std::optional<double> best;
    // Depth-first over all paths from (0,0); `acc` is the cost so far.
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
        if (!inside(i, j)) return;
        acc += std::abs(x[i] - y[j]);
        if (i == n - 1 && j == m - 1) {
            if (!best || acc < *best) best = acc;
            return;
        }
        if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, acc);
        if (i + 1 < n) walk(i + 1, j, acc);
        if (j + 1 < m) walk(i, j + 1, acc);
    };
    walk(0, 0, 0.0);
    return best;
}

// ---------------------------------------------------------------------------
// Graph oracle

inline constexpr std::size_t kGraphOracleMaxNodes = 8;

struct GraphMetrics {
    double density = 0.0;
    double transitivity = 0.0;
};

/// Density from a direct pair count; transitivity from every vertex triple,
/// counting each closed triple's three centres and each open triple's one.
inline GraphMetrics graph_metric_oracle(const network::ThresholdedGraph& g) {
    const std::size_t n = g.nodes();
    if (n > kGraphOracleMaxNodes) throw TooLargeError("graph oracle is limited to 8 nodes");
    GraphMetrics out;
    std::size_t edges = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) edges += g.has_edge(a, b) ? 1 : 0;
    }
    if (n >= 2) out.density = static_cast<double>(edges) / (static_cast<double>(n * (n - 1)) / 2.0);

    std::size_t closed = 0;
    std::size_t connected = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t c = b + 1; c < n; ++c) {
                const int ab = g.has_edge(a, b);
                const int ac = g.has_edge(a, c);
                const int bc = g.has_edge(b, c);
                const int sides = ab + ac + bc;
                if (sides == 3) {
                    closed += 3;
                    connected += 3;
                } else if (sides == 2) {
                    connected += 1;
                }
            }
        }
    }
    if (connected > 0) out.transitivity = static_cast<double>(closed) / static_cast<double>(connected);
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic series

inline const Date kSynthStart = Date::from_ymd(2020, 3, 16);

struct SyntheticScenario {
    std::size_t length = 366;
    std::size_t lag = 10;
    double noise_amplitude = 0.0;
    std::uint64_t seed = 42;

    void validate() const {
        if (length < 2) throw UsageError("synthetic length must be at least 2 days");
        if (lag >= length) throw UsageError("lag must be smaller than length");
        if (!(noise_amplitude >= 0.0) || !std::isfinite(noise_amplitude)) {
            throw UsageError("noise amplitude must be a finite value >= 0");
        }
    }
};

/// Gaussian epidemic-like bump over day t of a `length`-day window, peak 100.
inline double synth_bump(double t, std::size_t length) {
    const double centre = 0.4 * static_cast<double>(length);
    const double width = static_cast<double>(length) / 10.0;
    const double z = (t - centre) / width;
    return 100.0 * std::exp(-0.5 * z * z);
}

struct SyntheticPair {
    DateIndexedSeries case_like;
    DateIndexedSeries metric_like;
};

/// case_like is the bump; metric_like is the bump `lag` days later, min-max
/// scaled to [0,1], plus uniform noise in [-a, a], clipped to [0,1].
inline SyntheticPair synth_pair(const SyntheticScenario& sc) {
    sc.validate();
    std::vector<double> cases(sc.length);
    std::vector<double> shifted(sc.length);
    for (std::size_t t = 0; t < sc.length; ++t) {
        cases[t] = synth_bump(static_cast<double>(t), sc.length);
        shifted[t] = synth_bump(static_cast<double>(t) - static_cast<double>(sc.lag), sc.length);
    }
    auto metric = minmax_scaled(shifted);
    Lcg rng(sc.seed);
    for (double& v : metric) {
        const double noise = sc.noise_amplitude * (2.0 * rng.next_unit() - 1.0);
        v = std::clamp(v + noise, 0.0, 1.0);
    }
    return {DateIndexedSeries(kSynthStart, std::move(cases)), DateIndexedSeries(kSynthStart, std::move(metric))};
}

// ---------------------------------------------------------------------------
// Synthetic raw inputs for the whole pipeline

struct SegmentRow {
    std::string keyword;
    Date segment_start;
    Date date;
    double value;
};

struct WeeklyRow {
    std::string keyword;
    Date week_start;
    double value;
};

struct LineListRow {
    Date confirmed;
    std::optional<Date> removed;
};

struct SyntheticInputs {
    std::vector<SegmentRow> segments;
    std::vector<WeeklyRow> weekly;
    std::vector<LineListRow> linelist;
};

/// Keyword search interest driven by the same bump at keyword-specific lags
/// plus weekly seasonality and noise, exported as overlapping 30-day segments
/// (each scaled to peak 100, rounded like a trends export) and a whole-period
/// weekly reference. The line list confirms round(bump) patients per day,
/// each removed 14 days later.
inline SyntheticInputs synth_inputs(const SyntheticScenario& sc, std::size_t keywords = 15) {
    sc.validate();
    if (sc.length < 30) throw UsageError("synthetic pipeline inputs need at least 30 days");
    Lcg rng(sc.seed);
    SyntheticInputs out;
    const std::size_t len = sc.length;

    for (std::size_t k = 0; k < keywords; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "keyword%02zu", k + 1);
        const double lag = static_cast<double>(rng.next_int(0, 21));
        const double base = 5.0 + 20.0 * rng.next_unit();
        const double amp = 40.0 + 60.0 * rng.next_unit();
        const double season = 10.0 * rng.next_unit();
        const double phase = 6.283185307179586 * rng.next_unit();
        std::vector<double> interest(len);
        for (std::size_t t = 0; t < len; ++t) {
            const double td = static_cast<double>(t);
            const double noise = (5.0 + 100.0 * sc.noise_amplitude) * rng.next_unit();
            interest[t] = base + amp * synth_bump(td - lag, len) / 100.0 +
                          season * (1.0 + std::sin(6.283185307179586 * td / 7.0 + phase)) + noise;
        }

        std::vector<std::size_t> starts;
        for (std::size_t s = 0; s + 30 <= len; s += 15) starts.push_back(s);
        if (starts.back() + 30 < len) starts.push_back(len - 30);
        for (std::size_t s : starts) {
            double peak = 0.0;
            for (std::size_t t = s; t < s + 30; ++t) peak = std::max(peak, interest[t]);
            for (std::size_t t = s; t < s + 30; ++t) {
                out.segments.push_back({name, kSynthStart + static_cast<std::int64_t>(s),
                                        kSynthStart + static_cast<std::int64_t>(t),
                                        std::round(100.0 * interest[t] / peak)});
            }
        }

        std::vector<double> weeks;
        for (std::size_t w = 0; w < len; w += 7) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t t = w; t < std::min(len, w + 7); ++t, ++n) sum += interest[t];
            weeks.push_back(sum / static_cast<double>(n));
        }
        const double week_peak = *std::max_element(weeks.begin(), weeks.end());
        for (std::size_t w = 0; w < weeks.size(); ++w) {
            out.weekly.push_back({name, kSynthStart + static_cast<std::int64_t>(7 * w),
                                  std::round(100.0 * weeks[w] / week_peak)});
        }
    }

    for (std::size_t t = 0; t < len; ++t) {
        const auto count = static_cast<std::size_t>(std::round(synth_bump(static_cast<double>(t), len)));
        const Date conf = kSynthStart + static_cast<std::int64_t>(t);
        for (std::size_t c = 0; c < count; ++c) out.linelist.push_back({conf, conf + 14});
    }
    return out;
}

}  // namespace warpwatch::testkit

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "warpwatch/errors.hpp"

namespace warpwatch::stats {

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> rank_with_ties(std::span<const double> values) {
    if (values.empty()) throw EmptySeriesError("cannot rank an empty sample");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t k = 0;
    while (k < order.size()) {
        std::size_t end = k + 1;
        while (end < order.size() && values[order[end]] == values[order[k]]) ++end;
        // positions k..end-1 hold ranks k+1..end
        const double mean_rank = (static_cast<double>(k + 1) + static_cast<double>(end)) / 2.0;
        for (std::size_t t = k; t < end; ++t) ranks[order[t]] = mean_rank;
        k = end;
    }
    return ranks;
}

namespace detail {

inline constexpr double kEps = 1e-16;
inline constexpr int kMaxIter = 10000;

/// Lower regularized gamma P(a, x) by its power series; for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Upper regularized gamma Q(a, x) by modified Lentz continued fraction; for
/// x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw RangeError("gamma_q needs a > 0");
    if (x < 0.0) throw RangeError("gamma_q needs x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return std::clamp(1.0 - detail::gamma_p_series(a, x), 0.0, 1.0);
    return std::clamp(detail::gamma_q_continued_fraction(a, x), 0.0, 1.0);
}

/// Survival function of the chi-square distribution: Q(dof/2, x/2).
inline double chi_square_sf(double x, unsigned dof) {
    if (dof == 0) throw RangeError("chi-square needs at least one degree of freedom");
    if (x < 0.0) throw RangeError("chi-square statistic must be nonnegative");
    return gamma_q(0.5 * dof, 0.5 * x);
}

struct KruskalWallis {
    double h = 0.0;
    double p = 1.0;
    unsigned dof = 0;
};

/// Tie-corrected Kruskal-Wallis H with a chi-square(groups - 1) p-value.
/// A pooled sample with a single distinct value gives H = 0, p = 1.
inline KruskalWallis kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw DegenerateGroupsError("Kruskal-Wallis needs at least two groups");
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) throw DegenerateGroupsError("Kruskal-Wallis groups must be non-empty");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const double n = static_cast<double>(pooled.size());
    if (pooled.size() < 3) throw DegenerateGroupsError("Kruskal-Wallis needs at least 3 observations");

    KruskalWallis out;
    out.dof = static_cast<unsigned>(groups.size() - 1);

    const auto ranks = rank_with_ties(pooled);

    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    double tie_sum = 0.0;
    for (std::size_t k = 0; k < sorted.size();) {
        std::size_t end = k + 1;
        while (end < sorted.size() && sorted[end] == sorted[k]) ++end;
        const double t = static_cast<double>(end - k);
        tie_sum += t * t * t - t;
        k = end;
    }
    const double correction = 1.0 - tie_sum / (n * n * n - n);
    if (correction <= 0.0) return out;

    double weighted = 0.0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double rank_sum = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) rank_sum += ranks[offset + k];
        weighted += rank_sum * rank_sum / static_cast<double>(g.size());
        offset += g.size();
    }
    const double h = (12.0 / (n * (n + 1.0)) * weighted - 3.0 * (n + 1.0)) / correction;
    out.h = std::max(h, 0.0);
    out.p = chi_square_sf(out.h, out.dof);
    return out;
}

}  // namespace warpwatch::stats

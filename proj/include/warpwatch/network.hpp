#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "warpwatch/dtw.hpp"
#include "warpwatch/errors.hpp"
#include "warpwatch/timeseries.hpp"

namespace warpwatch::network {

// ---------------------------------------------------------------------------
// Distance correlation

namespace detail {

/// Double-centered pairwise distance matrix, row-major w*w.
inline std::vector<double> centered_distances(std::span<const double> v) {
    const std::size_t w = v.size();
    std::vector<double> a(w * w);
    std::vector<double> row_mean(w, 0.0);
    double grand = 0.0;
    for (std::size_t k = 0; k < w; ++k) {
        for (std::size_t l = 0; l < w; ++l) {
            const double d = std::abs(v[k] - v[l]);
            a[k * w + l] = d;
            row_mean[k] += d;
        }
    }
    for (std::size_t k = 0; k < w; ++k) {
        grand += row_mean[k];
        row_mean[k] /= static_cast<double>(w);
    }
    grand /= static_cast<double>(w * w);
    // Symmetric, so column means equal row means.
    for (std::size_t k = 0; k < w; ++k) {
        for (std::size_t l = 0; l < w; ++l) a[k * w + l] = a[k * w + l] - row_mean[k] - row_mean[l] + grand;
    }
    return a;
}

inline double mean_product(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s / static_cast<double>(a.size());
}

inline double dcor_from_centered(const std::vector<double>& a, const std::vector<double>& b, double var_a,
                                 double var_b) {
    if (var_a <= 0.0 || var_b <= 0.0) return 0.0;
    const double cov = std::max(mean_product(a, b), 0.0);
    const double r = std::sqrt(cov) / std::sqrt(std::sqrt(var_a) * std::sqrt(var_b));
    return std::clamp(r, 0.0, 1.0);
}

}  // namespace detail

/// Sample (V-statistic) distance correlation in [0,1]. Either input with
/// zero distance variance gives 0.
inline double distance_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw LengthMismatchError("distance correlation inputs differ in length (" +
                                  std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    }
    if (x.size() < 2) throw WindowTooShortError("distance correlation needs at least 2 observations");
    const auto a = detail::centered_distances(x);
    const auto b = detail::centered_distances(y);
    return detail::dcor_from_centered(a, b, detail::mean_product(a, a), detail::mean_product(b, b));
}

// ---------------------------------------------------------------------------
// Panels and graphs

/// Daily series for several keywords over one shared date range.
class KeywordPanel {
public:
    KeywordPanel(std::vector<std::string> keywords, std::vector<DateIndexedSeries> series)
        : keywords_(std::move(keywords)), series_(std::move(series)) {
        if (keywords_.size() != series_.size()) throw Error("panel keywords and series differ in count");
        if (series_.empty()) throw EmptySeriesError("panel has no keywords");
        std::set<std::string> seen;
        for (std::size_t k = 0; k < series_.size(); ++k) {
            if (!seen.insert(keywords_[k]).second) throw Error("duplicate keyword '" + keywords_[k] + "' in panel");
            if (series_[k].start() != series_[0].start() || series_[k].size() != series_[0].size()) {
                throw RangeMismatchError("keyword '" + keywords_[k] + "' covers " + series_[k].start().iso() +
                                         ".." + series_[k].last().iso() + ", panel covers " +
                                         series_[0].start().iso() + ".." + series_[0].last().iso());
            }
        }
    }

    /// Keywords in map (lexicographic) order.
    static KeywordPanel from_map(const std::map<std::string, DateIndexedSeries>& by_keyword) {
        std::vector<std::string> kws;
        std::vector<DateIndexedSeries> ss;
        for (const auto& [k, s] : by_keyword) {
            kws.push_back(k);
            ss.push_back(s);
        }
        return KeywordPanel(std::move(kws), std::move(ss));
    }

    std::size_t size() const noexcept { return series_.size(); }
    std::size_t days() const noexcept { return series_[0].size(); }
    Date start() const noexcept { return series_[0].start(); }
    Date last() const noexcept { return series_[0].last(); }
    const std::vector<std::string>& keywords() const noexcept { return keywords_; }
    const DateIndexedSeries& series(std::size_t k) const { return series_[k]; }

private:
    std::vector<std::string> keywords_;
    std::vector<DateIndexedSeries> series_;
};

/// Distance-correlation matrix over days [t - window + 1, t]; diagonal 1.
inline Matrix correlation_matrix_at(const KeywordPanel& panel, Date t, std::size_t window) {
    if (window < 2) throw WindowTooShortError("correlation window must be at least 2 days");
    if (t > panel.last()) throw RangeError("date " + t.iso() + " is after the panel ends");
    const Date from = t - static_cast<std::int64_t>(window) + 1;
    if (from < panel.start()) {
        throw InsufficientHistoryError("a " + std::to_string(window) + "-day window ending " + t.iso() +
                                       " starts before the panel (" + panel.start().iso() + ")");
    }
    const auto offset = static_cast<std::size_t>(from - panel.start());
    const std::size_t n = panel.size();

    std::vector<std::vector<double>> centered(n);
    std::vector<double> var(n);
    for (std::size_t k = 0; k < n; ++k) {
        centered[k] = detail::centered_distances(panel.series(k).values().subspan(offset, window));
        var[k] = detail::mean_product(centered[k], centered[k]);
    }
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = detail::dcor_from_centered(centered[i], centered[j], var[i], var[j]);
            m(i, j) = r;
            m(j, i) = r;
        }
    }
    return m;
}

/// Undirected simple graph on nodes 0..n-1.
class ThresholdedGraph {
public:
    explicit ThresholdedGraph(std::size_t n) : n_(n), adj_(n * n, 0) {}

    void add_edge(std::size_t i, std::size_t j) {
        if (i == j) throw Error("self-loops are not allowed");
        if (i >= n_ || j >= n_) throw Error("edge endpoint out of range");
        if (!adj_[i * n_ + j]) {
            adj_[i * n_ + j] = adj_[j * n_ + i] = 1;
            ++edges_;
        }
    }

    std::size_t nodes() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_; }
    bool has_edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }

    std::size_t degree(std::size_t v) const {
        std::size_t d = 0;
        for (std::size_t u = 0; u < n_; ++u) d += adj_[v * n_ + u];
        return d;
    }

    /// Edges as (i, j) with i < j, in lexicographic order.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                if (has_edge(i, j)) out.emplace_back(i, j);
            }
        }
        return out;
    }

private:
    std::size_t n_;
    std::size_t edges_ = 0;
    std::vector<std::uint8_t> adj_;
};

/// Edge {i,j} iff matrix(i,j) >= theta. The diagonal is ignored.
inline ThresholdedGraph threshold_graph(const Matrix& matrix, double theta) {
    if (matrix.rows() != matrix.cols()) throw Error("correlation matrix must be square");
    ThresholdedGraph g(matrix.rows());
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        for (std::size_t j = i + 1; j < matrix.cols(); ++j) {
            if (matrix(i, j) >= theta) g.add_edge(i, j);
        }
    }
    return g;
}

/// 2E / (n(n-1)).
inline double network_density(const ThresholdedGraph& g) {
    const std::size_t n = g.nodes();
    if (n < 2) throw TooFewNodesError("density needs at least 2 nodes");
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n * (n - 1));
}

/// Global transitivity: 3 * triangles / connected triplets, 0 when there are
/// no triplets.
inline double clustering_coefficient(const ThresholdedGraph& g) {
    const std::size_t n = g.nodes();
    std::size_t triangles = 0;
    std::size_t triplets = 0;
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t d = g.degree(v);
        if (d >= 2) triplets += d * (d - 1) / 2;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!g.has_edge(i, j)) continue;
            for (std::size_t k = j + 1; k < n; ++k) {
                if (g.has_edge(i, k) && g.has_edge(j, k)) ++triangles;
            }
        }
    }
    if (triplets == 0) return 0.0;
    return 3.0 * static_cast<double>(triangles) / static_cast<double>(triplets);
}

enum class MetricKind { Density, Clustering };

inline double graph_metric(const ThresholdedGraph& g, MetricKind kind) {
    return kind == MetricKind::Density ? network_density(g) : clustering_coefficient(g);
}

/// Correlation matrices for every computable day, first dated
/// start + window - 1. Shared across thresholds and metrics by the sweep.
inline std::vector<Matrix> rolling_correlations(const KeywordPanel& panel, std::size_t window) {
    if (window < 2) throw WindowTooShortError("correlation window must be at least 2 days");
    if (panel.days() < window) {
        throw InsufficientHistoryError("panel has " + std::to_string(panel.days()) + " days, window needs " +
                                       std::to_string(window));
    }
    std::vector<Matrix> out;
    out.reserve(panel.days() - window + 1);
    for (std::size_t k = window - 1; k < panel.days(); ++k) {
        out.push_back(correlation_matrix_at(panel, panel.start() + static_cast<std::int64_t>(k), window));
    }
    return out;
}

/// Metric series from precomputed rolling matrices whose first day is `first`.
inline DateIndexedSeries metric_series_from(const std::vector<Matrix>& matrices, Date first, MetricKind kind,
                                            double theta) {
    std::vector<double> values;
    values.reserve(matrices.size());
    for (const auto& m : matrices) values.push_back(graph_metric(threshold_graph(m, theta), kind));
    return DateIndexedSeries(first, std::move(values));
}

/// One metric value per day from start + window - 1 to the panel's end.
inline DateIndexedSeries metric_series(const KeywordPanel& panel, MetricKind kind, double theta,
                                       std::size_t window) {
    return metric_series_from(rolling_correlations(panel, window),
                              panel.start() + static_cast<std::int64_t>(window) - 1, kind, theta);
}

}  // namespace warpwatch::network

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warpwatch/errors.hpp"
#include "warpwatch/normalize.hpp"

namespace warpwatch {

/// Dense row-major matrix of doubles, 0-based storage.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Either unconstrained or a Sakoe-Chiba corridor |i - j| <= radius.
struct BandSpec {
    std::optional<std::size_t> radius;

    static BandSpec unconstrained() { return {}; }
    static BandSpec sakoe_chiba(std::size_t r) { return BandSpec{r}; }

    bool is_unconstrained() const noexcept { return !radius.has_value(); }

    /// Index convention does not matter: only the difference is tested.
    bool admits(std::size_t i, std::size_t j) const noexcept {
        if (!radius) return true;
        const std::size_t d = i > j ? i - j : j - i;
        return d <= *radius;
    }

    std::string describe() const {
        return radius ? "sakoe-chiba(" + std::to_string(*radius) + ")" : "unconstrained";
    }

    bool operator==(const BandSpec&) const = default;
};

/// 1-based (i, j) cell of the cost grid.
struct PathStep {
    std::size_t i = 1;
    std::size_t j = 1;
    bool operator==(const PathStep&) const = default;
};

using WarpingPath = std::vector<PathStep>;

struct DtwResult {
    double distance = 0.0;
    WarpingPath path;
    BandSpec band;
};

/// Entry (i,j) = |x_i - y_j|.
inline Matrix local_cost_matrix(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw EmptySeriesError("local cost matrix needs two non-empty series");
    Matrix c(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) c(i, j) = std::abs(x[i] - y[j]);
    }
    return c;
}

namespace detail {

inline void check_band_feasible(std::size_t n, std::size_t m, const BandSpec& band) {
    if (!band.admits(n, m)) {
        throw BandInfeasibleError("band radius " + std::to_string(*band.radius) +
                                  " cannot reach cell (" + std::to_string(n) + "," +
                                  std::to_string(m) + "): lengths differ by " +
                                  std::to_string(n > m ? n - m : m - n));
    }
}

}  // namespace detail

/// Accumulated cost under the band. Cells outside the band hold +inf and are
/// never used as predecessors.
inline Matrix accumulated_cost_matrix(const Matrix& cost, const BandSpec& band) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = cost.rows();
    const std::size_t m = cost.cols();
    Matrix acc(n, m, inf);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j_lo = 0;
        std::size_t j_hi = m;
        if (band.radius) {
            j_lo = i > *band.radius ? i - *band.radius : 0;
            j_hi = std::min(m, i + *band.radius + 1);
        }
        for (std::size_t j = j_lo; j < j_hi; ++j) {
            if (i == 0 && j == 0) {
                acc(0, 0) = cost(0, 0);
                continue;
            }
            double best = inf;
            if (i > 0) best = std::min(best, acc(i - 1, j));
            if (j > 0) best = std::min(best, acc(i, j - 1));
            if (i > 0 && j > 0) best = std::min(best, acc(i - 1, j - 1));
            acc(i, j) = cost(i, j) + best;
        }
    }
    return acc;
}

/// Walks from (N,M) back to (1,1) along minimal predecessors. Ties prefer the
/// diagonal, then (i-1,j), then (i,j-1).
inline WarpingPath backtrack(const Matrix& accumulated, const BandSpec& band) {
    const std::size_t n = accumulated.rows();
    const std::size_t m = accumulated.cols();
    if (n == 0 || m == 0) throw EmptySeriesError("cannot backtrack an empty matrix");
    detail::check_band_feasible(n, m, band);

    constexpr double inf = std::numeric_limits<double>::infinity();
    auto value = [&](std::size_t i, std::size_t j) {
        return band.admits(i, j) ? accumulated(i, j) : inf;
    };

    WarpingPath path;
    path.reserve(n + m);
    std::size_t i = n - 1;
    std::size_t j = m - 1;
    path.push_back({i + 1, j + 1});
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            const double diag = value(i - 1, j - 1);
            const double up = value(i - 1, j);
            const double left = value(i, j - 1);
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        }
        path.push_back({i + 1, j + 1});
    }
    std::reverse(path.begin(), path.end());
    return path;
}

/// Banded DTW between x and y. With `normalize_x`, x is min-max scaled to
/// [0,1] first and y is used as given.
inline DtwResult dtw(std::span<const double> x, std::span<const double> y, const BandSpec& band,
                     bool normalize_x = false) {
    if (x.empty() || y.empty()) throw EmptySeriesError("dtw needs two non-empty series");
    detail::check_band_feasible(x.size(), y.size(), band);

    std::vector<double> scaled;
    if (normalize_x) {
        scaled = minmax_scaled(x);
        x = scaled;
    }

    const Matrix cost = local_cost_matrix(x, y);
    const Matrix acc = accumulated_cost_matrix(cost, band);
    DtwResult result;
    result.distance = acc(x.size() - 1, y.size() - 1);
    result.path = backtrack(acc, band);
    result.band = band;
    return result;
}

/// Sum of |x_i - y_j| along a path, accumulated in path order.
inline double path_cost(std::span<const double> x, std::span<const double> y, const WarpingPath& path) {
    double total = 0.0;
    for (const auto& p : path) total = std::abs(x[p.i - 1] - y[p.j - 1]) + total;
    return total;
}

/// Boundary, monotonicity, continuity and band membership.
inline bool is_valid_path(const WarpingPath& path, std::size_t n, std::size_t m, const BandSpec& band) {
    if (path.empty() || path.front() != PathStep{1, 1} || path.back() != PathStep{n, m}) return false;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto& p = path[k];
        if (p.i < 1 || p.i > n || p.j < 1 || p.j > m || !band.admits(p.i, p.j)) return false;
        if (k == 0) continue;
        const auto& q = path[k - 1];
        if (p.i < q.i || p.j < q.j) return false;
        const std::size_t di = p.i - q.i;
        const std::size_t dj = p.j - q.j;
        if (di > 1 || dj > 1 || (di == 0 && dj == 0)) return false;
    }
    return true;
}

}  // namespace warpwatch

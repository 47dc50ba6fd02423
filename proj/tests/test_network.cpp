#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "warpwatch/network.hpp"
#include "warpwatch/testkit.hpp"

using namespace warpwatch;
using namespace warpwatch::network;

namespace {

using Vec = std::vector<double>;
const Date kStart = Date::parse("2020-03-16");

ThresholdedGraph graph(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> edges) {
    ThresholdedGraph g(n);
    for (auto [i, j] : edges) g.add_edge(i, j);
    return g;
}

KeywordPanel panel_of(std::vector<Vec> rows) {
    std::vector<std::string> kws;
    std::vector<DateIndexedSeries> ss;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        kws.push_back("kw" + std::to_string(k));
        ss.emplace_back(kStart, rows[k]);
    }
    return KeywordPanel(kws, ss);
}

}  // namespace

TEST(DistanceCorrelation, AffineRelationGivesOne) {
    EXPECT_NEAR(distance_correlation(Vec{1, 2, 3, 4}, Vec{3, 5, 7, 9}), 1.0, 1e-12);
}

TEST(DistanceCorrelation, ConstantInputGivesZero) {
    EXPECT_EQ(distance_correlation(Vec{1, 5, 2, 8}, Vec{3, 3, 3, 3}), 0.0);
    EXPECT_EQ(distance_correlation(Vec{3, 3, 3}, Vec{3, 3, 3}), 0.0);
}

TEST(DistanceCorrelation, HandComputedThreePoints) {
    // Centered matrices for x=(1,2,3) and y=(1,3,2):
    //   A = [[-10, 2, 8], [2, -4, 2], [8, 2, -10]] / 9
    //   B = [[-10, 8, 2], [8, -10, 2], [2, 2, -4]] / 9
    // mean(A*B) = 28/81, mean(A*A) = mean(B*B) = 40/81, so dCor = sqrt(28/40).
    EXPECT_NEAR(distance_correlation(Vec{1, 2, 3}, Vec{1, 3, 2}), 0.8366600265340756, 1e-12);
    EXPECT_NEAR(distance_correlation(Vec{1, 2, 3}, Vec{1, 3, 2}), std::sqrt(0.7), 1e-12);
}

TEST(DistanceCorrelation, Errors) {
    EXPECT_THROW(distance_correlation(Vec{1, 2}, Vec{1, 2, 3}), LengthMismatchError);
    EXPECT_THROW(distance_correlation(Vec{1}, Vec{1}), WindowTooShortError);
}

TEST(DistanceCorrelation, SymmetricAffineInvariantAndBounded) {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t w = 2 + rng() % 30;
        Vec x(w), y(w);
        for (std::size_t k = 0; k < w; ++k) {
            x[k] = g(rng);
            y[k] = 0.5 * x[k] * x[k] + g(rng);
        }
        const double r = distance_correlation(x, y);
        ASSERT_EQ(r, distance_correlation(y, x));
        ASSERT_GE(r, 0.0);
        ASSERT_LE(r, 1.0);
        Vec ax(w);
        for (std::size_t k = 0; k < w; ++k) ax[k] = -2.0 * x[k] + 4.0;
        ASSERT_NEAR(distance_correlation(ax, y), r, 1e-9);
    }
}

TEST(CorrelationMatrixAt, WindowBoundaries) {
    const auto p = panel_of({Vec{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16},
                             Vec{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16},
                             Vec{5, 1, 4, 2, 8, 1, 9, 3, 3, 7, 1, 6, 2, 8, 4, 4}});
    EXPECT_NO_THROW(correlation_matrix_at(p, kStart + 14, 15));
    EXPECT_THROW(correlation_matrix_at(p, kStart, 15), InsufficientHistoryError);
    EXPECT_THROW(correlation_matrix_at(p, kStart + 13, 15), InsufficientHistoryError);
    const auto m = correlation_matrix_at(p, kStart + 15, 15);
    EXPECT_EQ(m(0, 0), 1.0);
    EXPECT_NEAR(m(0, 1), 1.0, 1e-12);
    EXPECT_EQ(m(0, 2), m(2, 0));
    // Window ending t covers [t-14, t].
    const Vec xs{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    const Vec zs{1, 4, 2, 8, 1, 9, 3, 3, 7, 1, 6, 2, 8, 4, 4};
    EXPECT_EQ(m(0, 2), distance_correlation(xs, zs));
}

TEST(ThresholdGraph, InclusiveThreshold) {
    Matrix m(3, 3, 0.0);
    m(0, 1) = m(1, 0) = 0.8;
    m(1, 2) = m(2, 1) = 0.79999;
    const auto g = threshold_graph(m, 0.8);
    EXPECT_TRUE(g.has_edge(0, 1));
    EXPECT_FALSE(g.has_edge(1, 2));
    EXPECT_EQ(g.edge_count(), 1u);
}

TEST(ThresholdGraph, EmptyAndComplete) {
    Matrix low(5, 5, 0.3);
    EXPECT_EQ(threshold_graph(low, 0.4).edge_count(), 0u);
    Matrix high(5, 5, 1.0);
    EXPECT_EQ(threshold_graph(high, 0.8).edge_count(), 10u);
}

TEST(ThresholdGraph, MatchesElementwiseComparisonAndDensityMonotone) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 14;
        Matrix m(n, n, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = std::round(u(rng) * 10) / 10;
        double prev = 2.0;
        for (double theta : {0.1, 0.4, 0.5, 0.6, 0.8, 1.0}) {
            const auto g = threshold_graph(m, theta);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j) {
                        ASSERT_EQ(g.has_edge(i, j), m(i, j) >= theta);
                    }
            const double dens = network_density(g);
            ASSERT_LE(dens, prev);
            prev = dens;
        }
    }
}

TEST(NetworkDensity, Values) {
    Matrix full(15, 15, 1.0);
    EXPECT_EQ(network_density(threshold_graph(full, 0.5)), 1.0);
    EXPECT_EQ(network_density(ThresholdedGraph(15)), 0.0);
    ThresholdedGraph g(15);
    std::size_t added = 0;
    for (std::size_t i = 0; i < 15 && added < 21; ++i)
        for (std::size_t j = i + 1; j < 15 && added < 21; ++j, ++added) g.add_edge(i, j);
    EXPECT_DOUBLE_EQ(network_density(g), 0.2);
    EXPECT_THROW(network_density(ThresholdedGraph(1)), TooFewNodesError);
}

TEST(ClusteringCoefficient, Values) {
    EXPECT_EQ(clustering_coefficient(graph(3, {{0, 1}, {1, 2}, {0, 2}})), 1.0);
    EXPECT_EQ(clustering_coefficient(graph(4, {{0, 1}, {0, 2}, {0, 3}})), 0.0);
    // Triangle 0-1-2 plus pendant 3 on 2: degrees (2,2,3,1) give 1+1+3 = 5
    // connected triplets, one triangle -> 3/5.
    EXPECT_DOUBLE_EQ(clustering_coefficient(graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}})), 0.6);
    EXPECT_EQ(clustering_coefficient(ThresholdedGraph(1)), 0.0);
    EXPECT_EQ(clustering_coefficient(graph(2, {{0, 1}})), 0.0);
}

TEST(ClusteringCoefficient, IsTransitivityNotMeanLocal) {
    // Two triangles sharing node 0 ("bowtie"): transitivity 3*2/(6+1*4)=0.6,
    // while the mean of local coefficients would be (1/3+4)/5.
    const auto g = graph(5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}});
    EXPECT_DOUBLE_EQ(clustering_coefficient(g), 0.6);
}

TEST(ClusteringCoefficient, AgreesWithOracleOnRandomGraphs) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        ThresholdedGraph g(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng() % 2) g.add_edge(i, j);
        const auto o = testkit::graph_metric_oracle(g);
        ASSERT_EQ(clustering_coefficient(g), o.transitivity);
        if (n >= 2) {
            ASSERT_EQ(network_density(g), o.density);
        }
    }
}

TEST(MetricSeries, LengthFollowsWindow) {
    std::mt19937_64 rng(4);
    std::vector<Vec> rows(4, Vec(366));
    for (auto& r : rows)
        for (auto& v : r) v = static_cast<double>(rng() % 100);
    const auto p = panel_of(rows);
    const auto s = metric_series(p, MetricKind::Density, 0.5, 15);
    EXPECT_EQ(s.size(), 352u);
    EXPECT_EQ(s.start(), kStart + 14);
    for (double v : s.values()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    const auto short_panel = panel_of({Vec(30, 1.0), Vec(30, 2.0)});
    EXPECT_EQ(metric_series(short_panel, MetricKind::Clustering, 0.5, 30).size(), 1u);
    EXPECT_THROW(metric_series(short_panel, MetricKind::Density, 0.5, 31), InsufficientHistoryError);
}

TEST(MetricSeries, IdenticalKeywordsAreFullyConnected) {
    Vec base(40);
    for (std::size_t k = 0; k < base.size(); ++k) base[k] = std::sin(0.3 * static_cast<double>(k)) * 50 + 50;
    const auto p = panel_of({base, base, base, base});
    const auto density = metric_series(p, MetricKind::Density, 0.8, 15);
    const auto clustering = metric_series(p, MetricKind::Clustering, 0.8, 15);
    for (double v : density.values()) EXPECT_EQ(v, 1.0);
    for (double v : clustering.values()) EXPECT_EQ(v, 1.0);
}

TEST(KeywordPanel, RejectsMisalignedOrDuplicateKeywords) {
    EXPECT_THROW(KeywordPanel({"a", "b"}, {DateIndexedSeries(kStart, Vec(5, 1)), DateIndexedSeries(kStart + 1, Vec(5, 1))}),
                 RangeMismatchError);
    EXPECT_THROW(KeywordPanel({"a", "a"}, {DateIndexedSeries(kStart, Vec(5, 1)), DateIndexedSeries(kStart, Vec(5, 1))}),
                 Error);
}

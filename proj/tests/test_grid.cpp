#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "schwartz/grid.hpp"

using namespace schwartz;
using std::numbers::pi;

TEST(Grid, OneDimensionalNodes) {
  const auto g = make_grid<double>(1, {8}, {pi});
  ASSERT_EQ(g.size(), 8u);
  EXPECT_DOUBLE_EQ(g.point(0)[0], -pi);
  EXPECT_DOUBLE_EQ(g.point(1)[0], -3 * pi / 4);
  EXPECT_DOUBLE_EQ(g.point(4)[0], 0.0);
  EXPECT_DOUBLE_EQ(g.point(7)[0], 3 * pi / 4);
}

TEST(Grid, TwoDimensionalSpacingAndOrder) {
  const auto g = make_grid<double>(2, {4, 4}, {1, 2});
  EXPECT_EQ(g.size(), 16u);
  EXPECT_DOUBLE_EQ(g.spacing(0), 0.5);
  EXPECT_DOUBLE_EQ(g.spacing(1), 1.0);
  // Row-major, axis 0 slowest.
  EXPECT_DOUBLE_EQ(g.point(1)[0], -1.0);
  EXPECT_DOUBLE_EQ(g.point(1)[1], -1.0);
  EXPECT_DOUBLE_EQ(g.point(4)[0], -0.5);
  EXPECT_DOUBLE_EQ(g.point(4)[1], -2.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto idx = g.multi_index(k);
    EXPECT_EQ(g.flat_index(idx), k);
  }
}

TEST(Grid, RejectsInvalidShapes) {
  EXPECT_THROW(make_grid<double>(1, {7}, {1}), InvalidGrid);
  EXPECT_THROW(make_grid<double>(1, {2}, {1}), InvalidGrid);
  EXPECT_THROW(make_grid<double>(1, {8}, {0}), InvalidGrid);
  EXPECT_THROW(make_grid<double>(1, {8}, {-1}), InvalidGrid);
  EXPECT_THROW(make_grid<double>(2, {8}, {1}), InvalidGrid);
  EXPECT_THROW(make_grid<double>(1, {8, 8}, {1, 1}), InvalidGrid);
}

TEST(Grid, DualFrequencies) {
  const auto d = dual_grid(make_grid<double>(1, {8}, {pi}));
  EXPECT_NEAR(d.spacing(0), 1.0, 1e-15);
  for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(d.point(j)[0], double(j) - 4.0, 1e-14);

  const auto d4 = dual_grid(make_grid<double>(1, {4}, {1}));
  for (std::size_t j = 0; j < 4; ++j)
    EXPECT_NEAR(d4.point(j)[0], (double(j) - 2.0) * pi, 1e-14);
}

TEST(Grid, DualOfDualRestoresSpacing) {
  const auto g = make_grid<double>(2, {16, 8}, {3.0, 0.7});
  const auto dd = dual_grid(dual_grid(g));
  EXPECT_TRUE(dd == g);
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_NEAR(dd.spacing(i), g.spacing(i), 1e-15 * g.spacing(i));
}

TEST(Grid, QuadratureWeights) {
  EXPECT_DOUBLE_EQ(quadrature_weight(make_grid<double>(1, {8}, {pi})), pi / 4);
  EXPECT_DOUBLE_EQ(quadrature_weight(make_grid<double>(2, {4, 4}, {1, 2})), 0.5);
  EXPECT_DOUBLE_EQ(quadrature_weight(make_grid<double>(1, {4}, {1})), 0.5);
}

TEST(Grid, RandomShapesSatisfyMeasureAndDualityRelations) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> half_count(2, 40);
  std::uniform_real_distribution<double> extent(0.1, 50.0);
  std::uniform_int_distribution<int> dims(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = std::size_t(dims(rng));
    std::vector<std::size_t> counts;
    std::vector<double> extents;
    for (std::size_t i = 0; i < n; ++i) {
      counts.push_back(2 * std::size_t(half_count(rng)));
      extents.push_back(extent(rng));
    }
    const auto g = make_grid<double>(n, counts, extents);
    double box = 1;
    for (double L : extents) box *= 2 * L;
    EXPECT_NEAR(quadrature_weight(g) * double(g.size()), box, 1e-12 * box);
    const auto d = dual_grid(g);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(g.spacing(i) * d.spacing(i) * double(counts[i]), 2 * pi, 1e-12 * 2 * pi);
      EXPECT_NEAR(g.dual_spacing(i), d.spacing(i), 1e-12 * d.spacing(i));
    }
  }
}

TEST(Grid, LocateNodes) {
  const auto g = make_grid<double>(1, {8}, {pi});
  const double on = pi / 4, off = pi / 5, outside = pi;
  EXPECT_EQ(g.index_of(std::span<const double>(&on, 1)), 5u);
  EXPECT_THROW(g.index_of(std::span<const double>(&off, 1)), IndexOffGrid);
  EXPECT_THROW(g.index_of(std::span<const double>(&outside, 1)), IndexOffGrid);
}

TEST(GridDistribution, ValidatesSamples) {
  const auto g = make_grid<double>(1, {8}, {1});
  EXPECT_THROW(GridDistribution<double>(g, Samples<double>::Zero(7)), InvalidDistribution);
  Samples<double> s = Samples<double>::Zero(8);
  s[3] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(GridDistribution<double>(g, s), InvalidDistribution);
  const auto other = make_grid<double>(1, {8}, {2});
  EXPECT_THROW(GridDistribution<double>::zeros(g) + GridDistribution<double>::zeros(other),
               GridMismatch);
}

TEST(SymbolFunction, ArithmeticAndArity) {
  const auto p = coordinate_symbol<double>(1, 0);
  const auto a = constant_symbol<double>(1, {1, 0}) + p * p;
  EXPECT_EQ(a(3.0), std::complex<double>(10, 0));
  const auto b = std::complex<double>(0, -1) * p;
  EXPECT_EQ(b(2.0), std::complex<double>(0, -2));
  const auto two = coordinate_symbol<double>(2, 1);
  EXPECT_THROW(a * two, ArityMismatch);
  EXPECT_THROW(a(Point<double>::Zero(2)), ArityMismatch);
}

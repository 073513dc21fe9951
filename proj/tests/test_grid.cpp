#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "t2alg/basic.hpp"
#include "t2alg/grid.hpp"
#include "support.hpp"

using namespace t2alg;

TEST(Grid, PointsAreEquallySpaced) {
  EXPECT_EQ(make_grid(4).points(), (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_EQ(make_grid(2).points(), (std::vector<double>{0, 0.5, 1}));
}

TEST(Grid, RejectsResolutionBelowTwo) {
  EXPECT_ERROR_KIND(make_grid(1), ErrorKind::invalid_resolution);
  EXPECT_ERROR_KIND(make_grid(0), ErrorKind::invalid_resolution);
}

TEST(Grid, EndpointsAndOrder) {
  for (std::size_t n : {2, 3, 7, 64, 4096}) {
    const Grid g(n);
    EXPECT_EQ(g.point(0), 0.0);
    EXPECT_EQ(g.point(n), 1.0);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LT(g.point(i), g.point(i + 1));
  }
}

TEST(Grid, SnapExamples) {
  const Grid g(4);
  EXPECT_EQ(g.snap(0.3), 1u);
  EXPECT_EQ(g.snap(0.375), 2u);  // tie goes up
  EXPECT_EQ(g.snap(1.0), 4u);
  EXPECT_EQ(g.snap(0.0), 0u);
}

TEST(Grid, SnapOutOfRange) {
  const Grid g(4);
  for (double v : {-0.01, 1.01, std::nan("")}) EXPECT_ERROR_KIND(g.snap(v), ErrorKind::out_of_range);
}

TEST(Grid, SnapProperties) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n : {2, 5, 16, 100}) {
    const Grid g(n);
    for (std::size_t i = 0; i <= n; ++i) EXPECT_EQ(g.snap(g.point(i)), i);
    for (int t = 0; t < 2000; ++t) {
      double v = unit(rng);
      double w = unit(rng);
      if (v > w) std::swap(v, w);
      EXPECT_LE(g.snap(v), g.snap(w));
      EXPECT_LE(std::abs(static_cast<double>(g.snap(v)) / n - v), 0.5 / n + 1e-15);
    }
  }
}

TEST(Grid, ExactIndexWithinClosureTolerance) {
  const Grid g(8);
  EXPECT_EQ(g.exact_index(0.375 + 1e-13), std::optional<std::size_t>(3));
  EXPECT_FALSE(g.exact_index(0.375 + 1e-9).has_value());
  EXPECT_FALSE(g.is_point(0.0625));
}

TEST(Grid, ClosureOfBasicOperators) {
  const Grid g(4);
  EXPECT_TRUE(is_grid_closed(g, basic_op(g, BasicKind::TM)));
  EXPECT_TRUE(is_grid_closed(g, basic_op(g, BasicKind::TL)));
  EXPECT_FALSE(is_grid_closed(g, basic_op(g, BasicKind::TP)));
}

// Full-scan oracle: every entry of the real formula must be a multiple of 1/n.
TEST(Grid, ClosureFlagMatchesFullScan) {
  for (std::size_t n : {3, 4, 10}) {
    const Grid g(n);
    for (auto kind : {BasicKind::TM, BasicKind::TP, BasicKind::TL, BasicKind::SM, BasicKind::SP, BasicKind::SL}) {
      bool closed = true;
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
          const double v = basic_value(kind, double(i) / n, double(j) / n) * n;
          if (std::abs(v - std::round(v)) > 1e-9) closed = false;
        }
      }
      EXPECT_EQ(basic_op(g, kind).closed(), closed) << to_string(kind) << " n=" << n;
    }
  }
}

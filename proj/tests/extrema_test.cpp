#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "tsdown/extrema.hpp"

TEST(ArgMinMax, SingleElement) {
  const std::vector<double> y{3.0};
  const auto r = tsdown::argminmax<double>(y);
  EXPECT_EQ(r.min, 0u);
  EXPECT_EQ(r.max, 0u);
}

TEST(ArgMinMax, FirstOccurrenceOnTies) {
  std::vector<double> y(100, 1.0);
  y[40] = y[70] = 5.0;
  y[45] = y[90] = -2.0;
  const auto r = tsdown::argminmax<double>(y);
  EXPECT_EQ(r.min, 45u);
  EXPECT_EQ(r.max, 40u);
  const auto flat = tsdown::argminmax<double>(std::vector<double>(77, 2.5));
  EXPECT_EQ(flat.min, 0u);
  EXPECT_EQ(flat.max, 0u);
}

TEST(ArgMinMax, ExtremaInTheTail) {
  std::vector<double> y(67);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i % 10);
  y[66] = 100;
  y[65] = -100;
  const auto r = tsdown::argminmax<double>(y);
  EXPECT_EQ(r.min, 65u);
  EXPECT_EQ(r.max, 66u);
}

// Matches a plain strict-comparison scan for every length and offset,
// including tie-heavy data and lengths straddling the block size.
TEST(ArgMinMax, MatchesScalarScan) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 1 + rng() % 300;
    const bool ties = trial % 2 == 0;
    const auto s = oracle::random_series(rng, n, ties);
    const auto r = tsdown::argminmax<double>(s.y);
    const auto [mn, mx] = oracle::argminmax(s.y, 0, n);
    ASSERT_EQ(r.min, mn) << "n=" << n;
    ASSERT_EQ(r.max, mx) << "n=" << n;
  }
}

TEST(ArgMinMax, WorksForFloat) {
  std::vector<float> y(50, 0.0f);
  y[33] = -1.0f;
  y[34] = 2.0f;
  const auto r = tsdown::argminmax<float>(y);
  EXPECT_EQ(r.min, 33u);
  EXPECT_EQ(r.max, 34u);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tsdown/downsamplers.hpp"

using tsdown::Algorithm;
using tsdown::ErrorCode;
using tsdown::SelectedIndices;
using tsdown::TimeSeries;
using Idx = std::vector<std::size_t>;

namespace {

TimeSeries values(std::vector<double> ys) { return TimeSeries::from_values(std::move(ys)); }

Idx iota(std::size_t n) {
  Idx out(n);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

template <class F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const tsdown::Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

const TimeSeries kSmall = values({1, 3, 2, 0, 5, 4, 9, 8});

}  // namespace

TEST(EveryNth, Examples) {
  EXPECT_EQ(tsdown::every_nth(values(std::vector<double>(10)).view(), 5), (Idx{0, 2, 4, 6, 8}));
  EXPECT_EQ(tsdown::every_nth(values(std::vector<double>(10)).view(), 10), iota(10));
  // floor(i * 7 / 3) for i = 0, 1, 2.
  EXPECT_EQ(tsdown::every_nth(values(std::vector<double>(7)).view(), 3), (Idx{0, 2, 4}));
}

TEST(MinMax, Examples) {
  // Bucket [0,4): max 3@1, min 0@3. Bucket [4,8): min 4@5, max 9@6.
  EXPECT_EQ(tsdown::minmax(kSmall.view(), 4), (Idx{1, 3, 5, 6}));
  EXPECT_EQ(tsdown::minmax(values(std::vector<double>(10, 7.0)).view(), 4), (Idx{0, 5}));
  EXPECT_EQ(tsdown::minmax(kSmall.view(), 8), iota(8));
}

TEST(MinMax, RejectsOddNOut) {
  EXPECT_EQ(error_of([] { tsdown::minmax(kSmall.view(), 5); }), ErrorCode::kOddNOut);
}

TEST(M4, Examples) {
  // Bucket [0,4): first 0, max@1, min@3, last 3. Bucket [4,8): 4, min@5, max@6, 7.
  EXPECT_EQ(tsdown::m4(kSmall.view(), 8), (Idx{0, 1, 3, 4, 5, 6, 7}));
  std::vector<double> up(50);
  std::iota(up.begin(), up.end(), 0.0);
  EXPECT_EQ(tsdown::m4(values(up).view(), 4), (Idx{0, 49}));
  // One sample per bucket.
  EXPECT_EQ(tsdown::m4(values({1, 2}).view(), 8), (Idx{0, 1}));
}

TEST(M4, RejectsNOutNotDivisibleBy4) {
  EXPECT_EQ(error_of([] { tsdown::m4(kSmall.view(), 6); }), ErrorCode::kNOutNotDivisibleBy4);
}

TEST(Lttb, SpikeWins) {
  // One interior bucket [1,5); the spike at 2 spans area 25, the rest 0.
  EXPECT_EQ(tsdown::lttb(values({0, 0, 10, 0, 0, 0}).view(), 3), (Idx{0, 2, 5}));
}

TEST(Lttb, IdentityWhenNOutEqualsN) {
  std::mt19937_64 rng(1);
  const auto s = oracle::random_series(rng, 40);
  EXPECT_EQ(tsdown::lttb(tsdown::SeriesView{s.x, s.y}, 40), iota(40));
}

TEST(Lttb, CollinearPicksFirstOfEachBucket) {
  std::vector<double> line(101);
  std::iota(line.begin(), line.end(), 0.0);
  const auto s = values(line);
  const std::size_t n_out = 12;
  const auto p = tsdown::partition(1, 100, n_out - 2);
  Idx expected{0};
  for (std::size_t b = 0; b < p.size(); ++b) expected.push_back(p.begin(b));
  expected.push_back(100);
  EXPECT_EQ(tsdown::lttb(s.view(), n_out), expected);
}

TEST(Lttb, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 2000;
    const std::size_t n_out = 3 + rng() % std::min<std::size_t>(n - 2, 150);
    const auto s = oracle::random_series(rng, n, trial % 3 == 0);
    ASSERT_EQ(tsdown::lttb(tsdown::SeriesView{s.x, s.y}, n_out), oracle::lttb(s.x, s.y, n_out))
        << "trial " << trial << " N=" << n << " n_out=" << n_out;
  }
}

TEST(Lttb, RejectsBadNOut) {
  EXPECT_EQ(error_of([] { tsdown::lttb(kSmall.view(), 2); }), ErrorCode::kNOutOfRange);
  EXPECT_EQ(error_of([] { tsdown::lttb(kSmall.view(), 9); }), ErrorCode::kNOutOfRange);
}

TEST(Preselect, ExtremaOfEachSubBucketPlusEndpoints) {
  const std::vector<double> ys{5, 3, 8, 1, 7, 2, 9, 4, 6, 0};
  // n_out=4, r_ps=2: two sub-buckets over [1, 9), i.e. [1,5) and [5,9).
  Idx expected{0};
  for (auto [lo, hi] : {std::pair{1, 5}, std::pair{5, 9}}) {
    std::size_t mn = lo, mx = lo;
    for (int j = lo; j < hi; ++j) {
      if (ys[j] < ys[mn]) mn = j;
      if (ys[j] > ys[mx]) mx = j;
    }
    expected.push_back(std::min(mn, mx));
    expected.push_back(std::max(mn, mx));
  }
  expected.push_back(9);
  ASSERT_EQ(expected, (Idx{0, 2, 3, 5, 6, 9}));
  EXPECT_EQ(tsdown::minmax_preselect(values(ys).view(), 4, 2), expected);
}

TEST(Preselect, SmallSubBucketsKeepEverything) {
  std::mt19937_64 rng(3);
  const auto s = oracle::random_series(rng, 42);
  // 40 interior samples over (12 - 2) * 4/2 = 20 sub-buckets of 2.
  EXPECT_EQ(tsdown::minmax_preselect(tsdown::SeriesView{s.x, s.y}, 12, 4), iota(42));
  // Equal pairs are kept whole too.
  EXPECT_EQ(tsdown::minmax_preselect(values(std::vector<double>(42, 1.0)).view(), 12, 4), iota(42));
}

TEST(Preselect, ConstantSeriesKeepsOnePerSubBucket) {
  const auto s = values(std::vector<double>(102, 1.0));
  const auto got = tsdown::minmax_preselect(s.view(), 12, 4);
  const auto p = tsdown::partition(1, 101, 20);
  Idx expected{0};
  for (std::size_t b = 0; b < p.size(); ++b) expected.push_back(p.begin(b));
  expected.push_back(101);
  EXPECT_EQ(got, expected);
}

TEST(Preselect, SubBucketsTileLttbBuckets) {
  // Every group of r_ps/2 sub-buckets shares its outer bounds with one LTTB
  // bucket, so candidates never straddle an LTTB bucket boundary.
  for (std::size_t n : {103u, 1000u, 4097u}) {
    for (std::size_t n_out : {5u, 17u, 40u}) {
      for (std::size_t r : {2u, 4u, 6u, 8u}) {
        const std::size_t half = r / 2;
        if ((n_out - 2) * half > n - 2) continue;
        const auto coarse = tsdown::partition(1, n - 1, n_out - 2);
        const auto fine = tsdown::partition(1, n - 1, (n_out - 2) * half);
        for (std::size_t b = 0; b <= coarse.size(); ++b) {
          ASSERT_EQ(coarse.boundary(b), fine.boundary(b * half));
        }
      }
    }
  }
}

TEST(Preselect, Errors) {
  const auto s = values(std::vector<double>(20, 0.0));
  EXPECT_EQ(error_of([&] { tsdown::minmax_preselect(s.view(), 5, 3); }),
            ErrorCode::kBadPreselectionRatio);
  EXPECT_EQ(error_of([&] { tsdown::minmax_preselect(s.view(), 5, 1); }),
            ErrorCode::kBadPreselectionRatio);
  // (8 - 2) * 4 = 24 sub-buckets > 18 interior samples.
  EXPECT_EQ(error_of([&] { tsdown::minmax_preselect(s.view(), 8, 8); }),
            ErrorCode::kRatioTooLargeForSeries);
}

TEST(MinMaxLttb, RatioOneIsMinMaxWithEndpoints) {
  // MinMax gives [1,3,5,6]; forcing 0 displaces 1 and forcing 7 displaces 6.
  EXPECT_EQ(tsdown::minmaxlttb(kSmall.view(), 4, 1), (Idx{0, 3, 5, 7}));
  // Endpoints already selected: plain MinMax.
  const auto s = values({0, 5, 4, 9});
  EXPECT_EQ(tsdown::minmaxlttb(s.view(), 4, 1), (Idx{0, 1, 2, 3}));
}

TEST(MinMaxLttb, RatioOneAddsEndpointsWithoutDisplacingWhenRoomLeft) {
  // Flat first bucket yields one pick; index 0 is already that pick.
  const auto s = values({2, 2, 2, 2, 1, 5, 3, 4});
  EXPECT_EQ(tsdown::minmax(s.view(), 4), (Idx{0, 4, 5}));
  EXPECT_EQ(tsdown::minmaxlttb(s.view(), 4, 1), (Idx{0, 4, 5, 7}));
}

TEST(MinMaxLttb, DegeneratesToLttbWhenSubBucketsHoldTwoPoints) {
  std::mt19937_64 rng(9);
  for (std::size_t n = 3; n <= 120; ++n) {
    const auto s = oracle::random_series(rng, n, n % 2 == 0);
    const tsdown::SeriesView v{s.x, s.y};
    for (std::size_t n_out = 3; n_out <= n; ++n_out) {
      for (std::size_t r = 2; (n_out - 2) * (r / 2) <= n - 2; r += 2) {
        const std::size_t k = (n_out - 2) * (r / 2);
        if ((n - 2 + k - 1) / k > 2) continue;
        ASSERT_EQ(tsdown::minmaxlttb(v, n_out, r), tsdown::lttb(v, n_out))
            << "N=" << n << " n_out=" << n_out << " r_ps=" << r;
      }
    }
  }
}

TEST(MinMaxLttb, RunsLttbOnOriginalXOfCandidates) {
  std::mt19937_64 rng(17);
  const auto s = oracle::random_series(rng, 5000);
  const tsdown::SeriesView v{s.x, s.y};
  const auto cand = tsdown::minmax_preselect(v, 100, 4);
  std::vector<double> cx, cy;
  for (auto i : cand) {
    cx.push_back(s.x[i]);
    cy.push_back(s.y[i]);
  }
  Idx expected;
  for (auto i : oracle::lttb(cx, cy, 100)) expected.push_back(cand[i]);
  EXPECT_EQ(tsdown::minmaxlttb(v, 100, 4), expected);
}

TEST(MinMaxLttb, PicksGlobalExtremumWhereLttbPrefersLeftEdge) {
  // Previous pick (0,-10), next anchor (10,5). Twice the area of candidate
  // (x,y) is |15x - 10y - 100|: the left-edge point (1,8) scores 165, the
  // bucket maximum (6,10) 110 and the bucket minimum (4,-1) 30.
  const auto s = values({-10, 8, 5, 4, -1, 6, 10, 7, 6, 3, 5});
  EXPECT_EQ(tsdown::lttb(s.view(), 3), (Idx{0, 1, 10}));
  EXPECT_EQ(tsdown::minmaxlttb(s.view(), 3, 2), (Idx{0, 6, 10}));
}

TEST(Parallel, IdenticalToSequential) {
  std::mt19937_64 rng(77);
  const auto s = oracle::random_series(rng, 200'003);
  const tsdown::SeriesView v{s.x, s.y};
  for (auto algo : {Algorithm::kEveryNth, Algorithm::kMinMax, Algorithm::kM4,
                    Algorithm::kMinMaxLttb}) {
    const tsdown::DownsampleConfig seq{algo, 1000, 4, false, 1};
    const auto expected = tsdown::downsample(v, seq);
    for (std::size_t threads : {1u, 2u, 3u, 8u}) {
      auto par = seq;
      par.threads = threads;
      EXPECT_EQ(tsdown::run_parallel(v, par), expected)
          << tsdown::to_string(algo) << " threads=" << threads;
    }
  }
}

TEST(Parallel, MoreThreadsThanBuckets) {
  const auto s = values({1, 3, 2, 0, 5, 4, 9, 8});
  EXPECT_EQ(tsdown::minmax(s.view(), 4, 16), (Idx{1, 3, 5, 6}));
}

TEST(Parallel, LttbIsRejected) {
  const auto s = values(std::vector<double>(100, 0.0));
  EXPECT_EQ(error_of([&] { tsdown::run_parallel(s, {Algorithm::kLttb, 10, 4, true, 4}); }),
            ErrorCode::kNotParallelizable);
  EXPECT_EQ(error_of([&] { tsdown::downsample(s, {Algorithm::kLttb, 10, 4, true, 4}); }),
            ErrorCode::kNotParallelizable);
}

// Fuzzed contract checks shared by all algorithms: strictly increasing,
// in range, within the size budget, endpoints as each contract promises.
TEST(Properties, SelectionContracts) {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 8 + rng() % 5000;
    const auto s = oracle::random_series(rng, n, trial % 4 == 0);
    const tsdown::SeriesView v{s.x, s.y};
    const std::size_t n_out = 4 * (1 + rng() % std::min<std::size_t>(n / 4, 60));
    for (auto algo : {Algorithm::kEveryNth, Algorithm::kMinMax, Algorithm::kM4, Algorithm::kLttb,
                      Algorithm::kMinMaxLttb}) {
      for (std::size_t r : {1u, 2u, 4u}) {
        if (algo != Algorithm::kMinMaxLttb && r != 1) continue;
        const tsdown::DownsampleConfig c{algo, n_out, r, false, 1};
        if (!tsdown::validate(v, c)) continue;
        const auto idx = tsdown::downsample(v, c);
        ASSERT_FALSE(idx.empty());
        ASSERT_LE(idx.size(), n_out);
        ASSERT_LT(idx.back(), n);
        ASSERT_TRUE(std::adjacent_find(idx.begin(), idx.end(), std::greater_equal<>{}) ==
                    idx.end())
            << tsdown::to_string(algo);
        switch (algo) {
          case Algorithm::kEveryNth:
            EXPECT_EQ(idx.size(), n_out);
            EXPECT_EQ(idx.front(), 0u);
            break;
          case Algorithm::kM4:
            EXPECT_EQ(idx.front(), 0u);
            EXPECT_EQ(idx.back(), n - 1);
            break;
          case Algorithm::kLttb:
          case Algorithm::kMinMaxLttb:
            EXPECT_EQ(idx.front(), 0u);
            EXPECT_EQ(idx.back(), n - 1);
            if (algo == Algorithm::kLttb || r > 1) {
              EXPECT_EQ(idx.size(), n_out);
            }
            break;
          case Algorithm::kMinMax:
            break;
        }
      }
    }
  }
}

#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "tsdown/bench.hpp"

using tsdown::Algorithm;
using tsdown::BenchConfig;
using tsdown::BenchResult;

namespace {

const BenchConfig kLttb{Algorithm::kLttb, false, 1, 2000, 4};
const BenchConfig kSeq{Algorithm::kMinMaxLttb, false, 1, 2000, 4};
const BenchConfig kPar{Algorithm::kMinMaxLttb, true, 4, 2000, 4};

std::vector<BenchResult> synthetic(const BenchConfig& c, double per_sample,
                                   std::vector<std::size_t> sizes) {
  std::vector<BenchResult> out;
  for (auto n : sizes) out.push_back({c, n, per_sample * static_cast<double>(n), 0.0, 7});
  return out;
}

}  // namespace

TEST(FitLine, PerfectLineHasUnitR2) {
  const auto rows = synthetic(kLttb, 3e-9, {100'000, 300'000, 1'000'000, 3'000'000, 10'000'000});
  const auto report = tsdown::fit_and_report(rows);
  ASSERT_EQ(report.fits.size(), 1u);
  ASSERT_TRUE(report.fits[0].fit);
  EXPECT_NEAR(report.fits[0].fit->slope, 3e-9, 1e-20);
  EXPECT_NEAR(report.fits[0].fit->r2, 1.0, 1e-12);
  EXPECT_NEAR(report.fits[0].fit->intercept, 0.0, 1e-12);
}

TEST(FitLine, NeedsTwoDistinctX) {
  const std::vector<double> x{1, 1, 1}, y{1, 2, 3};
  EXPECT_THROW(tsdown::fit_line(x, y), tsdown::Error);
  EXPECT_THROW(tsdown::fit_line(std::vector<double>{1}, std::vector<double>{1}), tsdown::Error);
}

TEST(FitAndReport, InsufficientDataOnlyForShortConfig) {
  auto rows = synthetic(kLttb, 3e-9, {1000, 2000, 4000});
  const auto seq = synthetic(kSeq, 1e-9, {1000, 4000});
  rows.insert(rows.end(), seq.begin(), seq.end());
  const auto report = tsdown::fit_and_report(rows);
  ASSERT_EQ(report.fits.size(), 2u);
  EXPECT_TRUE(report.fits[0].fit);
  EXPECT_FALSE(report.fits[1].fit);
  EXPECT_NE(report.fits[1].error.find("InsufficientData"), std::string::npos);
}

TEST(FitAndReport, SpeedupsAtLargestSharedN) {
  auto rows = synthetic(kLttb, 10e-9, {1000, 2000, 4000, 8000});
  for (const auto& part : {synthetic(kSeq, 2e-9, {1000, 2000, 4000}),
                           synthetic(kPar, 0.5e-9, {1000, 2000, 4000})}) {
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const auto report = tsdown::fit_and_report(rows);
  ASSERT_TRUE(report.speedups);
  EXPECT_EQ(report.speedups->n, 4000u);
  EXPECT_NEAR(report.speedups->sequential(), 5.0, 1e-9);
  EXPECT_NEAR(*report.speedups->parallel(), 20.0, 1e-9);
  EXPECT_NEAR(*report.speedups->parallel_over_sequential(), 4.0, 1e-9);
  EXPECT_NE(report.summary.find("sequential speedup"), std::string::npos);
  EXPECT_NE(report.summary.find("parallel speedup"), std::string::npos);
}

TEST(RunBench, OneResultPerConfigAndSize) {
  const std::vector<BenchConfig> configs{kLttb, kSeq, {Algorithm::kMinMaxLttb, true, 2, 200, 4}};
  tsdown::BenchOptions opt;
  opt.sizes = {20'000, 40'000, 80'000};
  opt.repetitions = 5;
  std::size_t seen = 0;
  opt.on_result = [&](const BenchResult&) { ++seen; };
  const auto results = tsdown::run_bench(configs, opt);
  ASSERT_EQ(results.size(), 9u);
  EXPECT_EQ(seen, 9u);
  for (const auto& r : results) {
    EXPECT_EQ(r.repetitions, 5u);
    EXPECT_GT(r.median_s, 0.0);
    EXPECT_GE(r.iqr_s, 0.0);
  }
  std::ostringstream csv;
  tsdown::write_bench_csv(csv, results);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), tsdown::kBenchCsvHeader);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
}

TEST(RunBench, RejectsTooFewRepetitions) {
  tsdown::BenchOptions opt;
  opt.sizes = {1000};
  opt.repetitions = 4;
  try {
    tsdown::run_bench(std::vector<BenchConfig>{kLttb}, opt);
    FAIL();
  } catch (const tsdown::Error& e) {
    EXPECT_EQ(e.code(), tsdown::ErrorCode::kInsufficientData);
  }
}

TEST(RunBench, RepeatedMeasurementsOverlap) {
  tsdown::BenchOptions opt;
  opt.sizes = {1'000'000};
  opt.repetitions = 9;
  const std::vector<BenchConfig> configs{kLttb};
  const auto a = tsdown::run_bench(configs, opt).front();
  const auto b = tsdown::run_bench(configs, opt).front();
  EXPECT_LE(std::max(a.median_s - a.iqr_s, b.median_s - b.iqr_s),
            std::min(a.median_s + a.iqr_s, b.median_s + b.iqr_s))
      << a.median_s << " +- " << a.iqr_s << " vs " << b.median_s << " +- " << b.iqr_s;
}

TEST(Quantile, Interpolates) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(tsdown::quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(tsdown::quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(tsdown::quantile(v, 1.0), 4.0);
}

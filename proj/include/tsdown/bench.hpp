#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <new>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tsdown/core.hpp"
#include "tsdown/datagen.hpp"
#include "tsdown/downsamplers.hpp"
#include "tsdown/io.hpp"

namespace tsdown {

struct BenchConfig {
  Algorithm algorithm = Algorithm::kLttb;
  bool parallel = false;
  std::size_t threads = 1;
  std::size_t n_out = 2000;
  std::size_t r_ps = 4;

  DownsampleConfig downsample_config() const {
    return {algorithm, n_out, r_ps, parallel, parallel ? threads : 1};
  }

  std::string label() const {
    std::string s(to_string(algorithm));
    if (algorithm == Algorithm::kMinMaxLttb) s += " r_ps=" + std::to_string(r_ps);
    s += parallel ? " parallel x" + std::to_string(threads) : " sequential";
    return s;
  }

  auto key() const { return std::tuple(algorithm, parallel, parallel ? threads : 1, n_out, r_ps); }
  bool operator==(const BenchConfig& o) const { return key() == o.key(); }
};

struct BenchResult {
  BenchConfig config;
  std::size_t n = 0;
  double median_s = 0;
  double iqr_s = 0;
  std::size_t repetitions = 0;  // warm runs behind the median
};

inline const std::vector<std::size_t> kDefaultBenchSizes = {100'000, 300'000, 1'000'000,
                                                            3'000'000, 10'000'000};

struct BenchOptions {
  std::vector<std::size_t> sizes = kDefaultBenchSizes;
  std::size_t repetitions = 7;
  TemplateKind kind = TemplateKind::kRandomWalk;
  std::uint64_t seed = 0;
  std::function<void(const BenchResult&)> on_result;  // progress hook
};

/// LTTB sequential, MinMaxLTTB sequential and MinMaxLTTB on all hardware
/// threads, at n_out = 2000 and r_ps = 4.
inline std::vector<BenchConfig> default_bench_configs(std::size_t threads = hardware_threads()) {
  return {{Algorithm::kLttb, false, 1, 2000, 4},
          {Algorithm::kMinMaxLttb, false, 1, 2000, 4},
          {Algorithm::kMinMaxLttb, true, threads, 2000, 4}};
}

/// Linear interpolation between order statistics of a sorted sample.
inline double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Times one configuration on one series. The first run is a discarded
/// warm-up; every run's output must be strictly increasing.
inline BenchResult time_config(SeriesView series, const BenchConfig& config,
                               std::size_t repetitions) {
  const DownsampleConfig dc = config.downsample_config();
  validate_config(series.size(), dc).throw_if_error();
  std::vector<double> samples;
  samples.reserve(repetitions);
  for (std::size_t rep = 0; rep <= repetitions; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    const SelectedIndices out = downsample_unchecked(series, dc);
    const auto stop = std::chrono::steady_clock::now();
    if (out.empty() || !std::is_sorted(out.begin(), out.end(), std::less_equal<>{})) {
      throw std::logic_error(config.label() + " produced a non-increasing selection");
    }
    if (rep > 0) samples.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::sort(samples.begin(), samples.end());
  return {config, series.size(), quantile(samples, 0.5),
          quantile(samples, 0.75) - quantile(samples, 0.25), samples.size()};
}

/// One BenchResult per (config, N). Each N's series is generated once and
/// shared by all configs; configs run one after another.
inline std::vector<BenchResult> run_bench(std::span<const BenchConfig> configs,
                                          const BenchOptions& opt = {}) {
  if (opt.repetitions < 5) {
    throw Error(ErrorCode::kInsufficientData, "benchmarks need at least 5 repetitions");
  }
  std::vector<BenchResult> results;
  for (std::size_t n : opt.sizes) {
    TimeSeries series;
    try {
      series = generate({opt.kind, n, opt.seed, {}});
    } catch (const std::bad_alloc&) {
      throw Error(ErrorCode::kOutOfMemory, "cannot allocate a series of N=" + std::to_string(n));
    }
    for (const auto& config : configs) {
      try {
        results.push_back(time_config(series.view(), config, opt.repetitions));
      } catch (const std::bad_alloc&) {
        throw Error(ErrorCode::kOutOfMemory,
                    config.label() + " ran out of memory at N=" + std::to_string(n));
      }
      if (opt.on_result) opt.on_result(results.back());
    }
  }
  return results;
}

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "a line fit needs at least 2 points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw Error(ErrorCode::kInsufficientData, "all x values are equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += e * e;
  }
  f.r2 = syy == 0 ? (ss_res == 0 ? 1.0 : 0.0) : 1.0 - ss_res / syy;
  return f;
}

struct ConfigFit {
  BenchConfig config;
  std::size_t points = 0;
  std::optional<LinearFit> fit;  // empty when the config has < 3 sizes
  std::string error;
};

/// Runtime ratios at the largest N measured for all compared configs.
struct Speedups {
  std::size_t n = 0;
  double lttb_s = 0;
  double minmaxlttb_s = 0;
  std::optional<double> parallel_s;
  std::size_t parallel_threads = 0;

  double sequential() const { return lttb_s / minmaxlttb_s; }
  std::optional<double> parallel() const {
    return parallel_s ? std::optional(lttb_s / *parallel_s) : std::nullopt;
  }
  std::optional<double> parallel_over_sequential() const {
    return parallel_s ? std::optional(minmaxlttb_s / *parallel_s) : std::nullopt;
  }
};

struct ScalingReport {
  std::vector<ConfigFit> fits;
  std::optional<Speedups> speedups;
  std::string summary;
};

namespace detail {

inline const BenchResult* find_result(std::span<const BenchResult> results,
                                      const BenchConfig& c, std::size_t n) {
  for (const auto& r : results) {
    if (r.config == c && r.n == n) return &r;
  }
  return nullptr;
}

inline std::optional<Speedups> compute_speedups(std::span<const BenchResult> results) {
  const BenchConfig* lttb = nullptr;
  const BenchConfig* seq = nullptr;
  const BenchConfig* par = nullptr;
  for (const auto& r : results) {
    const auto& c = r.config;
    if (c.algorithm == Algorithm::kLttb && !c.parallel && !lttb) lttb = &c;
    if (c.algorithm == Algorithm::kMinMaxLttb && !c.parallel && !seq) seq = &c;
    if (c.algorithm == Algorithm::kMinMaxLttb && c.parallel && (!par || c.threads > par->threads)) {
      par = &c;
    }
  }
  if (!lttb || !seq) return std::nullopt;
  std::optional<Speedups> best;
  for (const auto& r : results) {
    if (!(r.config == *lttb)) continue;
    const BenchResult* s = find_result(results, *seq, r.n);
    if (!s || (best && r.n <= best->n)) continue;
    Speedups sp{r.n, r.median_s, s->median_s, std::nullopt, 0};
    if (par) {
      if (const BenchResult* p = find_result(results, *par, r.n)) {
        sp.parallel_s = p->median_s;
        sp.parallel_threads = par->threads;
      }
    }
    best = sp;
  }
  return best;
}

}  // namespace detail

/// Least-squares runtime-vs-N fit per config plus MinMaxLTTB-over-LTTB
/// speedups. Configs with fewer than 3 sizes get an InsufficientData entry.
inline ScalingReport fit_and_report(std::span<const BenchResult> results) {
  if (results.empty()) throw Error(ErrorCode::kInsufficientData, "no benchmark results");
  ScalingReport report;
  for (const auto& r : results) {
    const bool seen = std::any_of(report.fits.begin(), report.fits.end(),
                                  [&](const ConfigFit& f) { return f.config == r.config; });
    if (seen) continue;
    ConfigFit cf{r.config, 0, std::nullopt, {}};
    std::vector<double> ns, ts;
    for (const auto& q : results) {
      if (q.config == r.config) {
        ns.push_back(static_cast<double>(q.n));
        ts.push_back(q.median_s);
      }
    }
    cf.points = ns.size();
    if (ns.size() < 3) {
      cf.error = std::string(to_string(ErrorCode::kInsufficientData)) + ": " +
                 std::to_string(ns.size()) + " sizes, need 3";
    } else {
      cf.fit = fit_line(ns, ts);
    }
    report.fits.push_back(std::move(cf));
  }
  report.speedups = detail::compute_speedups(results);

  std::ostringstream out;
  char line[256];
  for (const auto& f : report.fits) {
    if (f.fit) {
      std::snprintf(line, sizeof line, "%-32s slope %.4e s/sample  intercept %+.3e s  R^2 %.4f\n",
                    f.config.label().c_str(), f.fit->slope, f.fit->intercept, f.fit->r2);
    } else {
      std::snprintf(line, sizeof line, "%-32s %s\n", f.config.label().c_str(), f.error.c_str());
    }
    out << line;
  }
  if (const auto& sp = report.speedups) {
    std::snprintf(line, sizeof line,
                  "sequential speedup (MinMaxLTTB vs LTTB, N=%zu): %.2fx (published claim: 10x)\n",
                  sp->n, sp->sequential());
    out << line;
    if (auto p = sp->parallel()) {
      std::snprintf(line, sizeof line,
                    "parallel speedup (MinMaxLTTB x%zu threads vs LTTB, N=%zu): %.2fx "
                    "(published claim: 30x); over sequential MinMaxLTTB: %.2fx\n",
                    sp->parallel_threads, sp->n, *p, *sp->parallel_over_sequential());
      out << line;
    } else {
      out << "parallel speedup: n/a (no parallel MinMaxLTTB measurement)\n";
    }
  } else {
    out << "sequential speedup: n/a (needs sequential LTTB and MinMaxLTTB at a shared N)\n";
    out << "parallel speedup: n/a\n";
  }
  report.summary = out.str();
  return report;
}

inline constexpr std::string_view kBenchCsvHeader =
    "algorithm,parallel,threads,N,n_out,r_ps,median_s,iqr_s,reps";

inline void write_bench_csv(std::ostream& out, std::span<const BenchResult> results) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : results) {
    out << to_string(r.config.algorithm) << ',' << (r.config.parallel ? 1 : 0) << ','
        << (r.config.parallel ? r.config.threads : 1) << ',' << r.n << ',' << r.config.n_out
        << ',' << r.config.r_ps << ',' << format_double(r.median_s) << ','
        << format_double(r.iqr_s) << ',' << r.repetitions << '\n';
  }
}

}  // namespace tsdown

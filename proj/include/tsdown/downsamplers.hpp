#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tsdown/core.hpp"
#include "tsdown/extrema.hpp"
#include "tsdown/parallel.hpp"

namespace tsdown {

namespace detail {

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

/// Drops kNoIndex holes, keeping order. Slots are already globally sorted.
inline void compact_slots(std::vector<std::size_t>& slots) {
  std::erase(slots, kNoIndex);
}

/// Writes the argmin/argmax of every bucket into two slots per bucket,
/// ordered by index, with the second slot empty when they coincide.
/// With `keep_pairs`, a two-sample bucket keeps both samples even if equal.
template <std::floating_point T>
void minmax_slots(std::span<const T> ys, const BucketPartition& buckets,
                  std::size_t threads, std::size_t* slots, bool keep_pairs = false) {
  parallel_for(buckets.size(), threads, [&](std::size_t first, std::size_t last) {
    for (std::size_t b = first; b < last; ++b) {
      const std::size_t lo = buckets.begin(b);
      const std::size_t len = buckets.end(b) - lo;
      std::size_t* out = slots + 2 * b;
      if (keep_pairs && len == 2) {
        out[0] = lo;
        out[1] = lo + 1;
        continue;
      }
      const auto [mn, mx] = argminmax(ys.subspan(lo, len));
      out[0] = lo + std::min(mn, mx);
      out[1] = mn == mx ? kNoIndex : lo + std::max(mn, mx);
    }
  });
}

inline void check_threads(std::size_t threads) {
  if (threads < 1) throw Error(ErrorCode::kBadThreadCount, "threads must be >= 1");
}

}  // namespace detail

/// indices[i] = floor(i * N / n_out).
template <std::floating_point T>
SelectedIndices every_nth(BasicSeriesView<T> series, std::size_t n_out,
                          std::size_t threads = 1) {
  detail::check_threads(threads);
  const std::size_t n = series.size();
  if (n_out < 1 || n_out > n) {
    throw Error(ErrorCode::kNOutOfRange, "every_nth needs 1 <= n_out <= N");
  }
  SelectedIndices out(n_out);
  parallel_for(n_out, threads, [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      out[i] = static_cast<std::size_t>(static_cast<unsigned __int128>(i) * n / n_out);
    }
  });
  return out;
}

/// Per bucket of an n_out/2-way split: argmin and argmax of y.
template <std::floating_point T>
SelectedIndices minmax(BasicSeriesView<T> series, std::size_t n_out,
                       std::size_t threads = 1) {
  detail::check_threads(threads);
  if (n_out % 2 != 0) {
    throw Error(ErrorCode::kOddNOut, "MinMax needs an even n_out, got " + std::to_string(n_out));
  }
  if (n_out < 2 || n_out / 2 > series.size()) {
    throw Error(ErrorCode::kNOutOfRange, "MinMax needs 1 <= n_out/2 <= N");
  }
  const BucketPartition buckets(0, series.size(), n_out / 2);
  SelectedIndices out(n_out);
  detail::minmax_slots(series.ys, buckets, threads, out.data());
  detail::compact_slots(out);
  return out;
}

/// Per bucket of an n_out/4-way split: first, argmin, argmax and last.
template <std::floating_point T>
SelectedIndices m4(BasicSeriesView<T> series, std::size_t n_out, std::size_t threads = 1) {
  detail::check_threads(threads);
  if (n_out % 4 != 0) {
    throw Error(ErrorCode::kNOutNotDivisibleBy4,
                "M4 needs n_out divisible by 4, got " + std::to_string(n_out));
  }
  if (n_out < 4 || n_out / 4 > series.size()) {
    throw Error(ErrorCode::kNOutOfRange, "M4 needs 1 <= n_out/4 <= N");
  }
  const BucketPartition buckets(0, series.size(), n_out / 4);
  SelectedIndices out(n_out);
  parallel_for(buckets.size(), threads, [&](std::size_t first, std::size_t last) {
    for (std::size_t b = first; b < last; ++b) {
      const std::size_t lo = buckets.begin(b);
      const std::size_t hi = buckets.end(b);
      const auto [mn, mx] = argminmax(series.ys.subspan(lo, hi - lo));
      std::array<std::size_t, 4> picks{lo, lo + mn, lo + mx, hi - 1};
      std::sort(picks.begin(), picks.end());
      const auto last_unique = std::unique(picks.begin(), picks.end());
      std::fill(last_unique, picks.end(), detail::kNoIndex);
      std::copy(picks.begin(), picks.end(), out.begin() + 4 * b);
    }
  });
  detail::compact_slots(out);
  return out;
}

/// Largest-Triangle-Three-Buckets. Keeps the first and last sample; splits
/// the interior [1, N-1) into n_out-2 equal-count buckets and keeps, per
/// bucket, the point spanning the largest triangle with the previously kept
/// point and the centroid of the next bucket (the last sample for the final
/// bucket). Ties go to the lowest index. Strictly sequential.
template <std::floating_point T>
SelectedIndices lttb(BasicSeriesView<T> series, std::size_t n_out) {
  const std::size_t n = series.size();
  if (n_out < 3 || n_out > n) {
    throw Error(ErrorCode::kNOutOfRange,
                "LTTB needs 3 <= n_out <= N, got n_out=" + std::to_string(n_out) +
                    " N=" + std::to_string(n));
  }
  const T* x = series.xs.data();
  const T* y = series.ys.data();
  const BucketPartition buckets(1, n - 1, n_out - 2);

  SelectedIndices out;
  out.reserve(n_out);
  out.push_back(0);

  std::size_t prev = 0;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    T cx, cy;
    if (b + 1 < buckets.size()) {
      const std::size_t nlo = buckets.begin(b + 1);
      const std::size_t nhi = buckets.end(b + 1);
      T sx = 0, sy = 0;
      for (std::size_t j = nlo; j < nhi; ++j) {
        sx += x[j];
        sy += y[j];
      }
      cx = sx / static_cast<T>(nhi - nlo);
      cy = sy / static_cast<T>(nhi - nlo);
    } else {
      cx = x[n - 1];
      cy = y[n - 1];
    }

    // Twice the triangle area; the factor does not change the argmax.
    const T ax = x[prev], ay = y[prev];
    const T dx_ac = ax - cx;
    const T dy_ca = cy - ay;
    T best_area = -1;
    std::size_t best = buckets.begin(b);
    for (std::size_t j = buckets.begin(b); j < buckets.end(b); ++j) {
      const T area = std::abs(dx_ac * (y[j] - ay) - (ax - x[j]) * dy_ca);
      if (area > best_area) {
        best_area = area;
        best = j;
      }
    }
    out.push_back(best);
    prev = best;
  }
  out.push_back(n - 1);
  return out;
}

/// MinMax candidates for MinMaxLTTB: the interior [1, N-1) is split into
/// (n_out-2) * r_ps/2 sub-buckets (each group of r_ps/2 tiles one LTTB
/// bucket), their argmin/argmax are kept, and the endpoints are added.
/// Two-sample sub-buckets are kept whole, so that preselection is the
/// identity whenever no sub-bucket holds more than two samples.
/// Holds at most r_ps*(n_out-2)+2 indices regardless of N.
template <std::floating_point T>
SelectedIndices minmax_preselect(BasicSeriesView<T> series, std::size_t n_out,
                                 std::size_t r_ps, std::size_t threads = 1) {
  detail::check_threads(threads);
  const std::size_t n = series.size();
  if (r_ps < 2 || r_ps % 2 != 0) {
    throw Error(ErrorCode::kBadPreselectionRatio,
                "preselection needs an even r_ps >= 2, got " + std::to_string(r_ps));
  }
  if (n_out < 3 || n_out > n) {
    throw Error(ErrorCode::kNOutOfRange, "preselection needs 3 <= n_out <= N");
  }
  const std::size_t sub_buckets = (n_out - 2) * (r_ps / 2);
  if (sub_buckets > n - 2) {
    throw Error(ErrorCode::kRatioTooLargeForSeries,
                std::to_string(sub_buckets) + " sub-buckets exceed the " +
                    std::to_string(n - 2) + " interior samples");
  }
  const BucketPartition buckets(1, n - 1, sub_buckets);
  SelectedIndices out(2 * sub_buckets + 2);
  out.front() = 0;
  out.back() = n - 1;
  detail::minmax_slots(series.ys, buckets, threads, out.data() + 1, true);
  detail::compact_slots(out);
  return out;
}

/// MinMaxLTTB with r_ps = 1: MinMax over n_out/2 buckets with index 0 and
/// N-1 forced in. A forced endpoint replaces its neighbouring pick when the
/// output would otherwise exceed n_out.
template <std::floating_point T>
SelectedIndices minmax_with_endpoints(BasicSeriesView<T> series, std::size_t n_out,
                                      std::size_t threads = 1) {
  SelectedIndices out = minmax(series, n_out, threads);
  const std::size_t last = series.size() - 1;
  if (out.front() != 0) {
    out.insert(out.begin(), 0);
    if (out.size() > n_out) out.erase(out.begin() + 1);
  }
  if (out.back() != last) {
    out.push_back(last);
    if (out.size() > n_out) out.erase(out.end() - 2);
  }
  return out;
}

/// MinMax preselection followed by LTTB over the preselected points, using
/// their original x values. Only the preselection uses `threads`.
template <std::floating_point T>
SelectedIndices minmaxlttb(BasicSeriesView<T> series, std::size_t n_out, std::size_t r_ps,
                           std::size_t threads = 1) {
  if (r_ps == 1) return minmax_with_endpoints(series, n_out, threads);

  const SelectedIndices candidates = minmax_preselect(series, n_out, r_ps, threads);
  std::vector<T> xs(candidates.size()), ys(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    xs[i] = series.xs[candidates[i]];
    ys[i] = series.ys[candidates[i]];
  }
  SelectedIndices out = lttb(BasicSeriesView<T>{xs, ys}, n_out);
  for (auto& i : out) i = candidates[i];
  return out;
}

/// Variant of minmaxlttb whose LTTB step sees the candidates' ranks
/// 0, 1, 2, ... as x instead of their original x. Only used to measure how
/// much that choice matters.
template <std::floating_point T>
SelectedIndices minmaxlttb_rank_x(BasicSeriesView<T> series, std::size_t n_out,
                                  std::size_t r_ps, std::size_t threads = 1) {
  if (r_ps == 1) return minmax_with_endpoints(series, n_out, threads);
  const SelectedIndices candidates = minmax_preselect(series, n_out, r_ps, threads);
  std::vector<T> xs(candidates.size()), ys(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    xs[i] = static_cast<T>(i);
    ys[i] = series.ys[candidates[i]];
  }
  SelectedIndices out = lttb(BasicSeriesView<T>{xs, ys}, n_out);
  for (auto& i : out) i = candidates[i];
  return out;
}

/// Runs the configured algorithm without the O(N) series scan. The caller
/// guarantees validate(series, config) passed.
template <std::floating_point T>
SelectedIndices downsample_unchecked(BasicSeriesView<T> series, const DownsampleConfig& config) {
  const std::size_t threads = config.parallel ? config.threads : 1;
  switch (config.algorithm) {
    case Algorithm::kEveryNth: return every_nth(series, config.n_out, threads);
    case Algorithm::kMinMax: return minmax(series, config.n_out, threads);
    case Algorithm::kM4: return m4(series, config.n_out, threads);
    case Algorithm::kLttb: return lttb(series, config.n_out);
    case Algorithm::kMinMaxLttb: return minmaxlttb(series, config.n_out, config.r_ps, threads);
  }
  throw Error(ErrorCode::kUnknownKind, "unknown algorithm");
}

/// Validates inputs, then runs the configured algorithm.
template <std::floating_point T>
SelectedIndices downsample(BasicSeriesView<T> series, const DownsampleConfig& config) {
  validate(series, config).throw_if_error();
  return downsample_unchecked(series, config);
}

inline SelectedIndices downsample(const TimeSeries& series, const DownsampleConfig& config) {
  return downsample(series.view(), config);
}

/// Parallel entry point. Output is identical to the sequential run.
template <std::floating_point T>
SelectedIndices run_parallel(BasicSeriesView<T> series, DownsampleConfig config) {
  if (config.algorithm == Algorithm::kLttb) {
    throw Error(ErrorCode::kNotParallelizable, "LTTB is not parallelizable");
  }
  config.parallel = true;
  return downsample(series, config);
}

inline SelectedIndices run_parallel(const TimeSeries& series, const DownsampleConfig& config) {
  return run_parallel(series.view(), config);
}

}  // namespace tsdown

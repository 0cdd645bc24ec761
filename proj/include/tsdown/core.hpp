#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tsdown {

/// Machine-readable reason attached to every error this library raises.
enum class ErrorCode {
  kOk,
  kLengthMismatch,
  kSeriesTooShort,
  kNonMonotonicX,
  kNonFiniteValue,
  kNOutOfRange,
  kBadPreselectionRatio,
  kInvalidPartition,
  kOddNOut,
  kNOutNotDivisibleBy4,
  kRatioTooLargeForSeries,
  kNotParallelizable,
  kDegenerateRange,
  kDimensionMismatch,
  kUnknownKind,
  kInsufficientData,
  kBadThreadCount,
  kBadKernel,
  kOutOfMemory,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSeriesTooShort: return "SeriesTooShort";
    case ErrorCode::kNonMonotonicX: return "NonMonotonicX";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kNOutOfRange: return "NOutOfRange";
    case ErrorCode::kBadPreselectionRatio: return "BadPreselectionRatio";
    case ErrorCode::kInvalidPartition: return "InvalidPartition";
    case ErrorCode::kOddNOut: return "OddNOut";
    case ErrorCode::kNOutNotDivisibleBy4: return "NOutNotDivisibleBy4";
    case ErrorCode::kRatioTooLargeForSeries: return "RatioTooLargeForSeries";
    case ErrorCode::kNotParallelizable: return "NotParallelizable";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnknownKind: return "UnknownKind";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kBadThreadCount: return "BadThreadCount";
    case ErrorCode::kBadKernel: return "BadKernel";
    case ErrorCode::kOutOfMemory: return "OutOfMemory";
  }
  return "Unknown";
}

class Error : public std::invalid_argument {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::invalid_argument(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Non-owning view of a series. Every downsampler selects indices into one.
template <std::floating_point T>
struct BasicSeriesView {
  std::span<const T> xs;
  std::span<const T> ys;

  std::size_t size() const noexcept { return ys.size(); }
};

using SeriesView = BasicSeriesView<double>;

/// Owning (x, y) series. Only the length contract is enforced here; the
/// ordering and finiteness contract is checked by validate_series().
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "xs has " + std::to_string(xs_.size()) + " values, ys has " +
                      std::to_string(ys_.size()));
    }
  }

  /// Series with x = 0, 1, ..., n-1.
  static TimeSeries from_values(std::vector<double> ys) {
    std::vector<double> xs(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
    return TimeSeries(std::move(xs), std::move(ys));
  }

  std::size_t size() const noexcept { return ys_.size(); }
  const std::vector<double>& xs() const noexcept { return xs_; }
  const std::vector<double>& ys() const noexcept { return ys_; }
  SeriesView view() const noexcept { return {xs_, ys_}; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

enum class Algorithm { kEveryNth, kMinMax, kM4, kLttb, kMinMaxLttb };

constexpr std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::kEveryNth: return "everynth";
    case Algorithm::kMinMax: return "minmax";
    case Algorithm::kM4: return "m4";
    case Algorithm::kLttb: return "lttb";
    case Algorithm::kMinMaxLttb: return "minmaxlttb";
  }
  return "unknown";
}

inline Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::kEveryNth, Algorithm::kMinMax, Algorithm::kM4,
                 Algorithm::kLttb, Algorithm::kMinMaxLttb}) {
    if (name == to_string(a)) return a;
  }
  throw Error(ErrorCode::kUnknownKind,
              "unknown algorithm '" + std::string(name) + "'");
}

struct DownsampleConfig {
  Algorithm algorithm = Algorithm::kMinMaxLttb;
  std::size_t n_out = 1000;
  std::size_t r_ps = 4;  // MinMaxLTTB only
  bool parallel = false;
  std::size_t threads = 1;  // only read when parallel
};

/// Strictly increasing indices into a series.
using SelectedIndices = std::vector<std::size_t>;

/// Equal-count split of [start, end) into k contiguous, non-empty buckets.
/// Bucket b is [start + floor(b*L/k), start + floor((b+1)*L/k)).
class BucketPartition {
 public:
  BucketPartition(std::size_t start, std::size_t end, std::size_t k)
      : start_(start), length_(end >= start ? end - start : 0), count_(k) {
    if (end < start || k < 1 || k > length_) {
      throw Error(ErrorCode::kInvalidPartition,
                  "cannot split [" + std::to_string(start) + ", " +
                      std::to_string(end) + ") into " + std::to_string(k) +
                      " non-empty buckets");
    }
  }

  std::size_t size() const noexcept { return count_; }

  /// Split position b in [0, size()]; boundary(0) == start, boundary(size()) == end.
  std::size_t boundary(std::size_t b) const noexcept {
    // 128-bit product: b * L overflows 64 bits only for absurd sizes, but the
    // formula must stay exact.
    return start_ + static_cast<std::size_t>(
                        static_cast<unsigned __int128>(b) * length_ / count_);
  }

  std::size_t begin(std::size_t b) const noexcept { return boundary(b); }
  std::size_t end(std::size_t b) const noexcept { return boundary(b + 1); }

  std::vector<std::size_t> boundaries() const {
    std::vector<std::size_t> out(count_ + 1);
    for (std::size_t b = 0; b <= count_; ++b) out[b] = boundary(b);
    return out;
  }

 private:
  std::size_t start_;
  std::size_t length_;
  std::size_t count_;
};

inline BucketPartition partition(std::size_t range_start, std::size_t range_end,
                                 std::size_t k) {
  return BucketPartition(range_start, range_end, k);
}

struct ValidationResult {
  ErrorCode code = ErrorCode::kOk;
  std::string message;

  bool ok() const noexcept { return code == ErrorCode::kOk; }
  explicit operator bool() const noexcept { return ok(); }

  void throw_if_error() const {
    if (!ok()) throw Error(code, message);
  }
};

template <std::floating_point T>
ValidationResult validate_series(BasicSeriesView<T> s) {
  if (s.xs.size() != s.ys.size()) {
    return {ErrorCode::kLengthMismatch, "xs and ys differ in length"};
  }
  if (s.size() < 2) {
    return {ErrorCode::kSeriesTooShort, "series needs at least 2 samples"};
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) {
      return {ErrorCode::kNonFiniteValue,
              "non-finite value at index " + std::to_string(i)};
    }
    if (i > 0 && s.xs[i] < s.xs[i - 1]) {
      return {ErrorCode::kNonMonotonicX,
              "x decreases at index " + std::to_string(i)};
    }
  }
  return {};
}

/// Checks the config against a series of length n. Does not look at values.
inline ValidationResult validate_config(std::size_t n, const DownsampleConfig& c) {
  const auto n_str = std::to_string(c.n_out);
  if (c.n_out < 3 || c.n_out > n) {
    return {ErrorCode::kNOutOfRange,
            "n_out=" + n_str + " must lie in [3, " + std::to_string(n) + "]"};
  }
  if (c.parallel && c.threads < 1) {
    return {ErrorCode::kBadThreadCount, "threads must be >= 1"};
  }
  switch (c.algorithm) {
    case Algorithm::kEveryNth:
      break;
    case Algorithm::kMinMax:
      if (c.n_out % 2 != 0) {
        return {ErrorCode::kOddNOut, "MinMax needs an even n_out, got " + n_str};
      }
      break;
    case Algorithm::kM4:
      if (c.n_out % 4 != 0) {
        return {ErrorCode::kNOutNotDivisibleBy4,
                "M4 needs n_out divisible by 4, got " + n_str};
      }
      break;
    case Algorithm::kLttb:
      if (c.parallel) {
        return {ErrorCode::kNotParallelizable, "LTTB is not parallelizable"};
      }
      break;
    case Algorithm::kMinMaxLttb:
      if (c.r_ps < 1 || (c.r_ps > 1 && c.r_ps % 2 != 0)) {
        return {ErrorCode::kBadPreselectionRatio,
                "r_ps must be 1 or an even integer >= 2, got " +
                    std::to_string(c.r_ps)};
      }
      if (c.r_ps == 1) {
        if (c.n_out % 2 != 0) {
          return {ErrorCode::kOddNOut,
                  "MinMaxLTTB with r_ps=1 needs an even n_out, got " + n_str};
        }
      } else if ((c.n_out - 2) * (c.r_ps / 2) > n - 2) {
        return {ErrorCode::kRatioTooLargeForSeries,
                std::to_string((c.n_out - 2) * (c.r_ps / 2)) +
                    " sub-buckets exceed the " + std::to_string(n - 2) +
                    " interior samples"};
      }
      break;
  }
  return {};
}

template <std::floating_point T>
ValidationResult validate(BasicSeriesView<T> s, const DownsampleConfig& c) {
  if (auto r = validate_series(s); !r) return r;
  return validate_config(s.size(), c);
}

inline ValidationResult validate(const TimeSeries& s, const DownsampleConfig& c) {
  return validate(s.view(), c);
}

}  // namespace tsdown

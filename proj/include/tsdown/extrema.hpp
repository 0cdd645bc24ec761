#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <utility>

namespace tsdown {

struct ArgMinMax {
  std::size_t min;
  std::size_t max;
};

/// Positions of the minimum and maximum of a non-empty range. Ties resolve
/// to the first occurrence.
///
/// The range is scanned in fixed-size blocks: per-lane min/max over a block
/// vectorizes, and the exact position is only searched for in the (rare)
/// blocks that improve the running extremum. The result equals a plain
/// strict-comparison scan.
template <std::floating_point T>
ArgMinMax argminmax(std::span<const T> ys) noexcept {
  constexpr std::size_t kLanes = 8;
  constexpr std::size_t kBlock = 32;
  static_assert(kBlock % kLanes == 0);

  const T* y = ys.data();
  const std::size_t n = ys.size();
  std::size_t imin = 0, imax = 0;
  T vmin = y[0], vmax = y[0];

  std::size_t i = 0;
  for (; i + kBlock <= n; i += kBlock) {
    T lmin[kLanes], lmax[kLanes];
    for (std::size_t j = 0; j < kLanes; ++j) lmin[j] = lmax[j] = y[i + j];
    for (std::size_t k = kLanes; k < kBlock; k += kLanes) {
      for (std::size_t j = 0; j < kLanes; ++j) {
        const T v = y[i + k + j];
        lmin[j] = v < lmin[j] ? v : lmin[j];
        lmax[j] = v > lmax[j] ? v : lmax[j];
      }
    }
    T bmin = lmin[0], bmax = lmax[0];
    for (std::size_t j = 1; j < kLanes; ++j) {
      bmin = lmin[j] < bmin ? lmin[j] : bmin;
      bmax = lmax[j] > bmax ? lmax[j] : bmax;
    }
    // Strict: an equal block extremum never displaces an earlier one.
    if (bmin < vmin) {
      vmin = bmin;
      std::size_t k = i;
      while (y[k] != bmin) ++k;
      imin = k;
    }
    if (bmax > vmax) {
      vmax = bmax;
      std::size_t k = i;
      while (y[k] != bmax) ++k;
      imax = k;
    }
  }
  for (; i < n; ++i) {
    const T v = y[i];
    if (v < vmin) {
      vmin = v;
      imin = i;
    }
    if (v > vmax) {
      vmax = v;
      imax = i;
    }
  }
  return {imin, imax};
}

}  // namespace tsdown

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "tsdown/core.hpp"
#include "tsdown/raster.hpp"

namespace tsdown {

/// Pixels that take part in a comparison: the ink of either image, dilated
/// by a square kernel. Metric sums are normalised by its size.
struct ConvMask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // 0 or 1
  std::size_t size = 0;

  bool contains(std::size_t i) const { return pixels[i] != 0; }
};

/// One row of an evaluation sweep.
struct MetricReport {
  std::string template_id;
  std::string algorithm;
  std::size_t n_out = 0;
  std::size_t r_ps = 0;  // 0 when the algorithm has no preselection ratio
  double pem20 = 0;
  double dssim = 0;
  double mse = 0;
};

namespace detail {

inline void require_same_shape(const RasterImage& a, const RasterImage& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                    std::to_string(b.width) + "x" + std::to_string(b.height));
  }
}

inline void require_same_shape(const RasterImage& a, const ConvMask& m) {
  if (a.width != m.width || a.height != m.height) {
    throw Error(ErrorCode::kDimensionMismatch, "mask does not match image size");
  }
}

}  // namespace detail

/// Dilation of {ref > 0 or cand > 0} by a kernel x kernel box, clipped at
/// the borders.
inline ConvMask conv_mask(const RasterImage& ref, const RasterImage& cand,
                          std::size_t kernel = 3) {
  detail::require_same_shape(ref, cand);
  if (kernel < 1 || kernel % 2 == 0) {
    throw Error(ErrorCode::kBadKernel, "mask kernel must be odd, got " + std::to_string(kernel));
  }
  const std::size_t w = ref.width, h = ref.height, radius = kernel / 2;

  // The box is separable: dilate rows, then columns.
  std::vector<std::uint8_t> ink(w * h), rows(w * h, 0);
  for (std::size_t i = 0; i < w * h; ++i) ink[i] = (ref.pixels[i] | cand.pixels[i]) != 0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!ink[r * w + c]) continue;
      const std::size_t c0 = c >= radius ? c - radius : 0;
      const std::size_t c1 = std::min(w - 1, c + radius);
      std::fill(rows.begin() + r * w + c0, rows.begin() + r * w + c1 + 1, 1);
    }
  }
  ConvMask mask{w, h, std::vector<std::uint8_t>(w * h, 0), 0};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!rows[r * w + c]) continue;
      const std::size_t r0 = r >= radius ? r - radius : 0;
      const std::size_t r1 = std::min(h - 1, r + radius);
      for (std::size_t rr = r0; rr <= r1; ++rr) mask.pixels[rr * w + c] = 1;
    }
  }
  mask.size = static_cast<std::size_t>(std::count(mask.pixels.begin(), mask.pixels.end(), 1));
  return mask;
}

/// Fraction of mask pixels whose intensities differ by more than `margin`.
inline double pem(const RasterImage& ref, const RasterImage& cand, const ConvMask& mask,
                  int margin = 20) {
  detail::require_same_shape(ref, cand);
  detail::require_same_shape(ref, mask);
  if (mask.size == 0) return 0.0;
  std::size_t differing = 0;
  for (std::size_t i = 0; i < ref.pixels.size(); ++i) {
    if (mask.contains(i) && std::abs(int{ref.pixels[i]} - int{cand.pixels[i]}) > margin) {
      ++differing;
    }
  }
  return static_cast<double>(differing) / static_cast<double>(mask.size);
}

/// Mean squared difference over the mask, intensities scaled to [0, 1].
inline double mse(const RasterImage& ref, const RasterImage& cand, const ConvMask& mask) {
  detail::require_same_shape(ref, cand);
  detail::require_same_shape(ref, mask);
  if (mask.size == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < ref.pixels.size(); ++i) {
    if (!mask.contains(i)) continue;
    const double d = (static_cast<double>(ref.pixels[i]) - cand.pixels[i]) / 255.0;
    sum += d * d;
  }
  return sum / static_cast<double>(mask.size);
}

/// Window used for the SSIM map around every pixel: rows and columns
/// [p - 3, p + 4], clipped to the image.
inline constexpr std::size_t kSsimWindow = 8;
inline constexpr double kSsimC1 = (0.01 * 255) * (0.01 * 255);
inline constexpr double kSsimC2 = (0.03 * 255) * (0.03 * 255);

namespace detail {

/// (w+1) x (h+1) summed-area table, exact in 64-bit integers.
template <class F>
std::vector<std::int64_t> integral(std::size_t w, std::size_t h, F value) {
  std::vector<std::int64_t> s((w + 1) * (h + 1), 0);
  for (std::size_t r = 0; r < h; ++r) {
    std::int64_t row = 0;
    for (std::size_t c = 0; c < w; ++c) {
      row += value(r * w + c);
      s[(r + 1) * (w + 1) + c + 1] = s[r * (w + 1) + c + 1] + row;
    }
  }
  return s;
}

inline std::int64_t box(const std::vector<std::int64_t>& s, std::size_t w, std::size_t r0,
                        std::size_t r1, std::size_t c0, std::size_t c1) {
  const std::size_t stride = w + 1;
  return s[r1 * stride + c1] - s[r0 * stride + c1] - s[r1 * stride + c0] + s[r0 * stride + c0];
}

}  // namespace detail

/// Mean of (1 - SSIM) / 2 over the mask. SSIM uses uniform 8x8 windows,
/// population statistics and the usual C1/C2 stabilisers. Symmetric in
/// its two images and exactly 0 when they are equal.
inline double dssim(const RasterImage& ref, const RasterImage& cand, const ConvMask& mask) {
  detail::require_same_shape(ref, cand);
  detail::require_same_shape(ref, mask);
  if (mask.size == 0) return 0.0;
  const std::size_t w = ref.width, h = ref.height;
  const auto& a = ref.pixels;
  const auto& b = cand.pixels;
  const auto sa = detail::integral(w, h, [&](std::size_t i) { return std::int64_t{a[i]}; });
  const auto sb = detail::integral(w, h, [&](std::size_t i) { return std::int64_t{b[i]}; });
  const auto saa = detail::integral(w, h, [&](std::size_t i) { return std::int64_t{a[i]} * a[i]; });
  const auto sbb = detail::integral(w, h, [&](std::size_t i) { return std::int64_t{b[i]} * b[i]; });
  const auto sab = detail::integral(w, h, [&](std::size_t i) { return std::int64_t{a[i]} * b[i]; });

  constexpr std::size_t before = kSsimWindow / 2 - 1, after = kSsimWindow / 2;
  double total = 0.0;
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t r0 = r >= before ? r - before : 0, r1 = std::min(h, r + after + 1);
    for (std::size_t c = 0; c < w; ++c) {
      if (!mask.contains(r * w + c)) continue;
      const std::size_t c0 = c >= before ? c - before : 0, c1 = std::min(w, c + after + 1);
      const auto n = static_cast<std::int64_t>((r1 - r0) * (c1 - c0));
      const std::int64_t xa = detail::box(sa, w, r0, r1, c0, c1);
      const std::int64_t xb = detail::box(sb, w, r0, r1, c0, c1);
      // n^2 * (co)variance, computed exactly.
      const std::int64_t vaa = n * detail::box(saa, w, r0, r1, c0, c1) - xa * xa;
      const std::int64_t vbb = n * detail::box(sbb, w, r0, r1, c0, c1) - xb * xb;
      const std::int64_t vab = n * detail::box(sab, w, r0, r1, c0, c1) - xa * xb;
      const double nn = static_cast<double>(n) * static_cast<double>(n);
      const double mu_a = static_cast<double>(xa) / static_cast<double>(n);
      const double mu_b = static_cast<double>(xb) / static_cast<double>(n);
      const double var_sum = static_cast<double>(vaa + vbb) / nn;
      const double cov = static_cast<double>(vab) / nn;
      const double ssim = ((2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2)) /
                          ((mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_sum + kSsimC2));
      total += std::clamp((1.0 - ssim) / 2.0, 0.0, 1.0);
    }
  }
  return total / static_cast<double>(mask.size);
}

}  // namespace tsdown

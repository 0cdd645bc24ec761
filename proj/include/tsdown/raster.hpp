#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsdown/core.hpp"

namespace tsdown {

/// Pixel grid plus the data window mapped onto it. y grows upwards in data
/// space and downwards in pixel rows.
struct Canvas {
  std::size_t width = 0;
  std::size_t height = 0;
  double x_min = 0, x_max = 1;
  double y_min = 0, y_max = 1;

  Canvas() = default;
  Canvas(std::size_t w, std::size_t h, double x0, double x1, double y0, double y1)
      : width(w), height(h), x_min(x0), x_max(x1), y_min(y0), y_max(y1) {
    if (w < 16 || h < 16) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "canvas must be at least 16x16, got " + std::to_string(w) + "x" +
                      std::to_string(h));
    }
    if (!(x1 > x0)) throw Error(ErrorCode::kDegenerateRange, "x range collapses");
    if (!(y1 > y0)) throw Error(ErrorCode::kDegenerateRange, "y range collapses");
  }

  double column(double x) const noexcept {
    return (x - x_min) / (x_max - x_min) * static_cast<double>(width);
  }
  double row(double y) const noexcept {
    return (y_max - y) / (y_max - y_min) * static_cast<double>(height);
  }
};

/// Row-major 8-bit grayscale image. Background 0, full ink 255.
struct RasterImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  RasterImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h, 0) {}

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
  std::uint8_t& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }

  bool operator==(const RasterImage&) const = default;
};

/// Data bounds padded by 2% per side; a collapsed axis is padded by 0.5.
template <std::floating_point T>
Canvas fit_canvas(BasicSeriesView<T> series, std::size_t width, std::size_t height) {
  if (series.size() < 1) throw Error(ErrorCode::kSeriesTooShort, "empty series");
  auto pad = [](double lo, double hi) {
    if (hi > lo) {
      const double margin = 0.02 * (hi - lo);
      return std::pair{lo - margin, hi + margin};
    }
    return std::pair{lo - 0.5, hi + 0.5};
  };
  const auto [ylo, yhi] = std::minmax_element(series.ys.begin(), series.ys.end());
  const auto [x0, x1] = pad(series.xs.front(), series.xs.back());
  const auto [y0, y1] = pad(*ylo, *yhi);
  return Canvas(width, height, x0, x1, y0, y1);
}

inline Canvas fit_canvas(const TimeSeries& series, std::size_t width, std::size_t height) {
  return fit_canvas(series.view(), width, height);
}

namespace detail {

inline constexpr double kHalfStroke = 1.0;  // 2 px line width

inline double segment_distance(double px, double py, double ax, double ay, double bx,
                               double by) noexcept {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
  const double ex = px - (ax + t * dx), ey = py - (ay + t * dy);
  return std::sqrt(ex * ex + ey * ey);
}

/// Adds one anti-aliased 2 px stroke. A pixel's coverage is approximated
/// from the distance d of its centre to the segment as
/// clamp(1 + 0.5 - d, 0, 1), which is exact for axis-aligned strokes.
inline void draw_segment(RasterImage& img, double ax, double ay, double bx, double by) {
  const double reach = kHalfStroke + 0.5;
  const double w = static_cast<double>(img.width), h = static_cast<double>(img.height);
  const double cmin = std::max(0.0, std::floor(std::min(ax, bx) - reach));
  const double cmax = std::min(w - 1, std::ceil(std::max(ax, bx) + reach));
  const double rmin = std::max(0.0, std::floor(std::min(ay, by) - reach));
  const double rmax = std::min(h - 1, std::ceil(std::max(ay, by) + reach));
  if (cmin > cmax || rmin > rmax) return;

  for (auto r = static_cast<std::size_t>(rmin); r <= static_cast<std::size_t>(rmax); ++r) {
    for (auto c = static_cast<std::size_t>(cmin); c <= static_cast<std::size_t>(cmax); ++c) {
      const double d = segment_distance(static_cast<double>(c) + 0.5,
                                        static_cast<double>(r) + 0.5, ax, ay, bx, by);
      const double coverage = std::clamp(reach - d, 0.0, 1.0);
      if (coverage <= 0.0) continue;
      const int ink = static_cast<int>(coverage * 255.0 + 0.5);
      auto& px = img.at(r, c);
      px = static_cast<std::uint8_t>(std::min(255, px + ink));
    }
  }
}

}  // namespace detail

/// Draws consecutive points (all of them, or the selected ones) joined by
/// straight 2 px anti-aliased strokes. Overlapping ink saturates at 255.
template <std::floating_point T>
RasterImage rasterize(BasicSeriesView<T> series, std::span<const std::size_t> indices,
                      const Canvas& canvas) {
  const bool all = indices.empty();
  const std::size_t count = all ? series.size() : indices.size();
  if (count < 2) throw Error(ErrorCode::kSeriesTooShort, "need at least 2 points to draw");
  auto point = [&](std::size_t k) {
    const std::size_t i = all ? k : indices[k];
    return std::pair{canvas.column(static_cast<double>(series.xs[i])),
                     canvas.row(static_cast<double>(series.ys[i]))};
  };

  RasterImage img(canvas.width, canvas.height);
  auto [ax, ay] = point(0);
  for (std::size_t k = 1; k < count; ++k) {
    const auto [bx, by] = point(k);
    detail::draw_segment(img, ax, ay, bx, by);
    ax = bx;
    ay = by;
  }
  return img;
}

template <std::floating_point T>
RasterImage rasterize(BasicSeriesView<T> series, const Canvas& canvas) {
  return rasterize(series, std::span<const std::size_t>{}, canvas);
}

inline RasterImage rasterize(const TimeSeries& series, std::span<const std::size_t> indices,
                             const Canvas& canvas) {
  return rasterize(series.view(), indices, canvas);
}

inline RasterImage rasterize(const TimeSeries& series, const Canvas& canvas) {
  return rasterize(series.view(), std::span<const std::size_t>{}, canvas);
}

}  // namespace tsdown

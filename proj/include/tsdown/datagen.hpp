#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tsdown/core.hpp"

namespace tsdown {

enum class TemplateKind { kWhiteNoise, kRandomWalk, kSineNoise, kEcgLike, kBouncingBall };

inline constexpr TemplateKind kAllTemplateKinds[] = {
    TemplateKind::kWhiteNoise, TemplateKind::kRandomWalk, TemplateKind::kSineNoise,
    TemplateKind::kEcgLike, TemplateKind::kBouncingBall};

constexpr std::string_view to_string(TemplateKind k) noexcept {
  switch (k) {
    case TemplateKind::kWhiteNoise: return "white_noise";
    case TemplateKind::kRandomWalk: return "random_walk";
    case TemplateKind::kSineNoise: return "sine_noise";
    case TemplateKind::kEcgLike: return "ecg_like";
    case TemplateKind::kBouncingBall: return "bouncing_ball";
  }
  return "unknown";
}

inline TemplateKind parse_template_kind(std::string_view name) {
  for (auto k : kAllTemplateKinds) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorCode::kUnknownKind, "unknown template kind '" + std::string(name) + "'");
}

struct TemplateParams {
  double amplitude = 1.0;
  double noise = 0.1;          // sine_noise / ecg_like noise, relative to amplitude
  double cycles = 5.0;         // sine_noise periods over the whole series
  std::size_t beats = 20;      // ecg_like pulses over the whole series
  std::size_t bounces = 8;     // bouncing_ball floor contacts
  double restitution = 0.8;    // bouncing_ball velocity kept per bounce
};

struct TemplateSpec {
  TemplateKind kind = TemplateKind::kWhiteNoise;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  TemplateParams params{};
};

/// Standard normal variates from mt19937_64 via Box-Muller. Both the engine
/// and the transform are fully specified, so streams are reproducible
/// across standard libraries (std::normal_distribution is not).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace detail {

inline double gaussian_bump(double phase, double centre, double width) {
  const double z = (phase - centre) / width;
  return std::exp(-0.5 * z * z);
}

/// One heartbeat over phase in [0, 1): P wave, QRS complex, T wave.
inline double ecg_beat(double phase) {
  return 0.15 * gaussian_bump(phase, 0.20, 0.025) - 0.15 * gaussian_bump(phase, 0.37, 0.010) +
         1.00 * gaussian_bump(phase, 0.40, 0.012) - 0.25 * gaussian_bump(phase, 0.43, 0.010) +
         0.30 * gaussian_bump(phase, 0.65, 0.040);
}

/// Ball released at the apex of arc 0, sampled up to the apex of arc
/// `bounces`. Arc j lasts restitution^j and peaks at amplitude *
/// restitution^(2j), so every floor contact lies strictly inside the series.
inline std::vector<double> bouncing_ball(std::size_t n, const TemplateParams& p) {
  const std::size_t arcs = p.bounces + 1;
  std::vector<double> start(arcs), duration(arcs), height(arcs);
  double t = -0.5;  // arc 0 starts half a duration before the apex at t = 0
  for (std::size_t j = 0; j < arcs; ++j) {
    duration[j] = std::pow(p.restitution, static_cast<double>(j));
    height[j] = p.amplitude * duration[j] * duration[j];
    start[j] = t;
    t += duration[j];
  }
  const double end = start[arcs - 1] + 0.5 * duration[arcs - 1];

  std::vector<double> ys(n);
  std::size_t arc = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double tk = end * static_cast<double>(k) / static_cast<double>(n - 1);
    while (arc + 1 < arcs && tk >= start[arc + 1]) ++arc;
    const double u = 2.0 * (tk - start[arc]) / duration[arc] - 1.0;  // -1..1 over the arc
    ys[k] = std::max(0.0, height[arc] * (1.0 - u * u));
  }
  return ys;
}

}  // namespace detail

/// Deterministic synthetic template with x = 0, 1, ..., n-1.
inline TimeSeries generate(const TemplateSpec& spec) {
  if (spec.n < 2) throw Error(ErrorCode::kSeriesTooShort, "template needs n >= 2");
  const auto& p = spec.params;
  const std::size_t n = spec.n;
  const double dn = static_cast<double>(n);
  NormalStream normal(spec.seed);
  std::vector<double> ys(n);

  switch (spec.kind) {
    case TemplateKind::kWhiteNoise:
      for (auto& y : ys) y = p.amplitude * normal();
      break;
    case TemplateKind::kRandomWalk:
      ys[0] = 0.0;
      for (std::size_t k = 1; k < n; ++k) ys[k] = ys[k - 1] + p.amplitude * normal();
      break;
    case TemplateKind::kSineNoise:
      for (std::size_t k = 0; k < n; ++k) {
        const double phase = 2.0 * std::numbers::pi * p.cycles * static_cast<double>(k) / dn;
        ys[k] = p.amplitude * (std::sin(phase) + p.noise * normal());
      }
      break;
    case TemplateKind::kEcgLike: {
      const double beat_len = dn / static_cast<double>(std::max<std::size_t>(1, p.beats));
      for (std::size_t k = 0; k < n; ++k) {
        const double beats = static_cast<double>(k) / beat_len;
        const double wander = 0.05 * std::sin(2.0 * std::numbers::pi * beats / 7.0);
        ys[k] = p.amplitude *
                (detail::ecg_beat(beats - std::floor(beats)) + wander + 0.2 * p.noise * normal());
      }
      break;
    }
    case TemplateKind::kBouncingBall:
      ys = detail::bouncing_ball(n, p);
      break;
  }
  return TimeSeries::from_values(std::move(ys));
}

/// FNV-1a over the little-endian bytes of every y value.
inline std::uint64_t checksum(const TimeSeries& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double y : s.ys()) {
    std::uint64_t bits;
    std::memcpy(&bits, &y, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace tsdown

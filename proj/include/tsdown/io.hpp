#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tsdown/core.hpp"
#include "tsdown/metrics.hpp"
#include "tsdown/raster.hpp"

namespace tsdown {

/// Unreadable, unwritable or malformed files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw IoError("line " + std::to_string(line) + ": cannot parse number '" +
                  std::string(field) + "'");
  }
  return v;
}

}  // namespace detail

/// Parses `x,y` CSV text with a one-line header.
inline TimeSeries parse_series_csv(std::string_view text) {
  std::vector<double> xs, ys;
  std::size_t line_no = 0;
  bool header = true;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw IoError("line " + std::to_string(line_no) + ": expected 'x,y'");
    }
    xs.push_back(detail::parse_double(line.substr(0, comma), line_no));
    ys.push_back(detail::parse_double(line.substr(comma + 1), line_no));
  }
  return TimeSeries(std::move(xs), std::move(ys));
}

inline TimeSeries read_series_csv(const std::string& path) {
  return parse_series_csv(detail::read_file(path));
}

/// Writes `x,y` rows for all points, or only the selected ones.
inline void write_series_csv(std::ostream& out, SeriesView s,
                             std::span<const std::size_t> indices = {}) {
  out << "x,y\n";
  std::string line;
  auto row = [&](std::size_t i) {
    line = format_double(s.xs[i]);
    line += ',';
    line += format_double(s.ys[i]);
    line += '\n';
    out << line;
  };
  if (indices.empty()) {
    for (std::size_t i = 0; i < s.size(); ++i) row(i);
  } else {
    for (std::size_t i : indices) row(i);
  }
}

inline void write_series_csv(const std::string& path, SeriesView s,
                             std::span<const std::size_t> indices = {}) {
  auto out = detail::open_output(path);
  write_series_csv(out, s, indices);
  detail::finish(out, path);
}

inline void write_indices_csv(std::ostream& out, std::span<const std::size_t> indices) {
  out << "index\n";
  for (std::size_t i : indices) out << i << '\n';
}

// Binary series: "TSB1", u64 count, then count (x, y) f64 pairs, all
// little-endian.
inline constexpr std::string_view kBinaryMagic = "TSB1";

namespace detail {

template <class U>
void put_le(std::string& buf, U v) {
  for (std::size_t b = 0; b < sizeof(U); ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

template <class U>
U get_le(const char* p) {
  U v = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    v |= static_cast<U>(static_cast<unsigned char>(p[b])) << (8 * b);
  }
  return v;
}

inline std::uint64_t double_bits(double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, sizeof u);
  return u;
}

inline double bits_double(std::uint64_t u) {
  double d;
  std::memcpy(&d, &u, sizeof d);
  return d;
}

}  // namespace detail

inline std::string encode_series_binary(SeriesView s, std::span<const std::size_t> indices = {}) {
  const std::size_t count = indices.empty() ? s.size() : indices.size();
  std::string buf(kBinaryMagic);
  buf.reserve(12 + 16 * count);
  detail::put_le<std::uint64_t>(buf, count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = indices.empty() ? k : indices[k];
    detail::put_le(buf, detail::double_bits(s.xs[i]));
    detail::put_le(buf, detail::double_bits(s.ys[i]));
  }
  return buf;
}

inline TimeSeries decode_series_binary(std::string_view data) {
  if (data.size() < 12 || data.substr(0, 4) != kBinaryMagic) {
    throw IoError("not a TSB1 series (bad magic)");
  }
  const auto count = detail::get_le<std::uint64_t>(data.data() + 4);
  if (count > (data.size() - 12) / 16 || data.size() != 12 + 16 * count) {
    throw IoError("TSB1 payload size does not match its count");
  }
  std::vector<double> xs(count), ys(count);
  const char* p = data.data() + 12;
  for (std::size_t i = 0; i < count; ++i, p += 16) {
    xs[i] = detail::bits_double(detail::get_le<std::uint64_t>(p));
    ys[i] = detail::bits_double(detail::get_le<std::uint64_t>(p + 8));
  }
  return TimeSeries(std::move(xs), std::move(ys));
}

inline TimeSeries read_series_binary(const std::string& path) {
  return decode_series_binary(detail::read_file(path));
}

inline void write_series_binary(const std::string& path, SeriesView s,
                                std::span<const std::size_t> indices = {}) {
  auto out = detail::open_output(path);
  const std::string buf = encode_series_binary(s, indices);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  detail::finish(out, path);
}

/// Binary PGM (P5, maxval 255).
inline std::string encode_pgm(const RasterImage& img) {
  std::string buf = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                    "\n255\n";
  buf.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return buf;
}

inline RasterImage decode_pgm(std::string_view data) {
  std::size_t pos = 0;
  auto token = [&]() {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    return data.substr(start, pos - start);
  };
  auto number = [&](std::string_view t) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) throw IoError("bad PGM header");
    return v;
  };
  if (token() != "P5") throw IoError("not a binary PGM (P5)");
  const std::size_t w = number(token()), h = number(token()), maxval = number(token());
  if (maxval != 255) throw IoError("only 8-bit PGM is supported");
  ++pos;  // single whitespace before the raster
  if (data.size() < pos || data.size() - pos != w * h) throw IoError("PGM raster size mismatch");
  RasterImage img(w, h);
  std::memcpy(img.pixels.data(), data.data() + pos, w * h);
  return img;
}

inline void write_pgm(const std::string& path, const RasterImage& img) {
  auto out = detail::open_output(path);
  const std::string buf = encode_pgm(img);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  detail::finish(out, path);
}

inline RasterImage read_pgm(const std::string& path) { return decode_pgm(detail::read_file(path)); }

inline constexpr std::string_view kMetricsCsvHeader = "template_id,algorithm,n_out,r_ps,pem20,dssim,mse";

inline void write_metrics_csv(std::ostream& out, std::span<const MetricReport> rows) {
  out << kMetricsCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.template_id << ',' << r.algorithm << ',' << r.n_out << ',' << r.r_ps << ','
        << format_double(r.pem20) << ',' << format_double(r.dssim) << ','
        << format_double(r.mse) << '\n';
  }
}

}  // namespace tsdown

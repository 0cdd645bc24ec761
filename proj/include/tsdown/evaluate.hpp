#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "tsdown/core.hpp"
#include "tsdown/downsamplers.hpp"
#include "tsdown/io.hpp"
#include "tsdown/metrics.hpp"
#include "tsdown/parallel.hpp"
#include "tsdown/raster.hpp"

namespace tsdown {

struct NamedSeries {
  std::string id;
  TimeSeries series;
};

/// One downsampler setting to score. r_ps is 0 unless the algorithm is
/// MinMaxLTTB.
struct EvalCandidate {
  Algorithm algorithm = Algorithm::kLttb;
  std::size_t r_ps = 0;
};

/// Ten log-spaced sizes over [200, 2000], rounded to multiples of 4 so
/// that every algorithm (M4 included) accepts them.
inline std::vector<std::size_t> default_n_out_grid() {
  std::vector<std::size_t> grid;
  for (int i = 0; i < 10; ++i) {
    const double v = 200.0 * std::pow(10.0, i / 9.0);
    grid.push_back(4 * static_cast<std::size_t>(std::llround(v / 4.0)));
  }
  return grid;
}

/// Expands algorithms x ratios; only MinMaxLTTB takes a ratio.
inline std::vector<EvalCandidate> make_candidates(std::span<const Algorithm> algorithms,
                                                  std::span<const std::size_t> ratios) {
  std::vector<EvalCandidate> out;
  for (Algorithm a : algorithms) {
    if (a == Algorithm::kMinMaxLttb) {
      for (std::size_t r : ratios) out.push_back({a, r});
    } else {
      out.push_back({a, 0});
    }
  }
  return out;
}

struct EvalOptions {
  std::size_t width = 800;
  std::size_t height = 400;
  std::size_t mask_kernel = 3;
  int margin = 20;
  std::vector<std::size_t> n_out_grid = default_n_out_grid();
  std::vector<EvalCandidate> candidates;
  std::size_t threads = 1;
  std::string dump_dir;  // PGM dumps when non-empty
  bool rank_x_variant = false;  // also score MinMaxLTTB with rank x in step 2
};

struct EvalFailure {
  std::string template_id;
  std::string algorithm;
  std::size_t n_out = 0;
  std::size_t r_ps = 0;
  std::string message;
};

struct EvalOutcome {
  std::vector<MetricReport> reports;
  std::vector<EvalFailure> failures;
  std::vector<MetricReport> rank_x_reports;  // algorithm "minmaxlttb_rank_x"
};

/// Scores a candidate image against the reference with all three metrics.
inline MetricReport score(const RasterImage& reference, const RasterImage& candidate,
                          std::size_t mask_kernel = 3, int margin = 20) {
  const ConvMask mask = conv_mask(reference, candidate, mask_kernel);
  MetricReport r;
  r.pem20 = pem(reference, candidate, mask, margin);
  r.dssim = dssim(reference, candidate, mask);
  r.mse = mse(reference, candidate, mask);
  return r;
}

/// Renders every template in full and downsampled by every candidate at
/// every grid size, on the canvas fitted to the full series. Rows come out
/// ordered by (template, candidate, n_out) whatever the thread count.
/// Failing combinations are collected and skipped.
inline EvalOutcome evaluate(std::span<const NamedSeries> templates, const EvalOptions& opt) {
  EvalOutcome outcome;
  for (const auto& tpl : templates) {
    const SeriesView s = tpl.series.view();
    validate_series(s).throw_if_error();
    const Canvas canvas = fit_canvas(s, opt.width, opt.height);
    const RasterImage reference = rasterize(s, canvas);
    if (!opt.dump_dir.empty()) write_pgm(opt.dump_dir + "/" + tpl.id + "_reference.pgm", reference);

    struct Task {
      EvalCandidate candidate;
      std::size_t n_out;
    };
    std::vector<Task> tasks;
    for (const auto& c : opt.candidates) {
      for (std::size_t n_out : opt.n_out_grid) tasks.push_back({c, n_out});
    }
    std::vector<MetricReport> rows(tasks.size());
    std::vector<std::optional<MetricReport>> rank_rows(tasks.size());
    std::vector<std::string> errors(tasks.size());

    parallel_for(tasks.size(), opt.threads, [&](std::size_t first, std::size_t last) {
      for (std::size_t t = first; t < last; ++t) {
        const auto& [cand, n_out] = tasks[t];
        try {
          DownsampleConfig config;
          config.algorithm = cand.algorithm;
          config.n_out = n_out;
          config.r_ps = cand.r_ps == 0 ? 1 : cand.r_ps;
          const SelectedIndices idx = downsample(s, config);
          const RasterImage image = rasterize(s, std::span<const std::size_t>(idx), canvas);
          rows[t] = score(reference, image, opt.mask_kernel, opt.margin);
          if (opt.rank_x_variant && cand.algorithm == Algorithm::kMinMaxLttb && cand.r_ps >= 2) {
            const SelectedIndices ranked = minmaxlttb_rank_x(s, n_out, cand.r_ps);
            rank_rows[t] = score(reference, rasterize(s, std::span<const std::size_t>(ranked), canvas),
                                 opt.mask_kernel, opt.margin);
          }
          if (!opt.dump_dir.empty()) {
            std::string name = opt.dump_dir + "/" + tpl.id + "_" + std::string(to_string(cand.algorithm));
            if (cand.r_ps != 0) name += "_r" + std::to_string(cand.r_ps);
            write_pgm(name + "_n" + std::to_string(n_out) + ".pgm", image);
          }
        } catch (const std::exception& e) {
          errors[t] = e.what();
        }
      }
    });

    for (std::size_t t = 0; t < tasks.size(); ++t) {
      const std::string algo(to_string(tasks[t].candidate.algorithm));
      if (!errors[t].empty()) {
        outcome.failures.push_back(
            {tpl.id, algo, tasks[t].n_out, tasks[t].candidate.r_ps, errors[t]});
        continue;
      }
      rows[t].template_id = tpl.id;
      rows[t].algorithm = algo;
      rows[t].n_out = tasks[t].n_out;
      rows[t].r_ps = tasks[t].candidate.r_ps;
      if (auto& rank = rank_rows[t]) {
        rank->template_id = tpl.id;
        rank->algorithm = "minmaxlttb_rank_x";
        rank->n_out = rows[t].n_out;
        rank->r_ps = rows[t].r_ps;
        outcome.rank_x_reports.push_back(std::move(*rank));
      }
      outcome.reports.push_back(std::move(rows[t]));
    }
  }
  return outcome;
}

/// Per (template, algorithm, r_ps): metric means over the n_out grid.
struct MetricMeans {
  double pem20 = 0, dssim = 0, mse = 0;
  std::size_t count = 0;
};

using MeansKey = std::tuple<std::string, std::string, std::size_t>;

inline std::map<MeansKey, MetricMeans> mean_metrics(std::span<const MetricReport> rows) {
  std::map<MeansKey, MetricMeans> means;
  for (const auto& r : rows) {
    auto& m = means[{r.template_id, r.algorithm, r.r_ps}];
    m.pem20 += r.pem20;
    m.dssim += r.dssim;
    m.mse += r.mse;
    ++m.count;
  }
  for (auto& [key, m] : means) {
    m.pem20 /= static_cast<double>(m.count);
    m.dssim /= static_cast<double>(m.count);
    m.mse /= static_cast<double>(m.count);
  }
  return means;
}

/// Plain-text comparison table; PEM_20 deltas are relative to LTTB on the
/// same template when LTTB was evaluated.
inline std::string summarize(std::span<const MetricReport> rows) {
  const auto means = mean_metrics(rows);
  std::ostringstream out;
  out << "template        algorithm    r_ps  mean_pem20  mean_dssim  mean_mse    d_pem20_vs_lttb\n";
  char line[160];
  for (const auto& [key, m] : means) {
    const auto& [tpl, algo, r_ps] = key;
    std::string delta = "-";
    if (auto it = means.find({tpl, "lttb", 0}); it != means.end() && algo != "lttb") {
      std::snprintf(line, sizeof line, "%+.4f", m.pem20 - it->second.pem20);
      delta = line;
    }
    std::snprintf(line, sizeof line, "%-15s %-12s %4zu  %10.4f  %10.4f  %10.6f  %s\n", tpl.c_str(),
                  algo.c_str(), r_ps, m.pem20, m.dssim, m.mse, delta.c_str());
    out << line;
  }
  return out.str();
}

/// Mean PEM_20 of MinMaxLTTB with original x against the rank-x variant,
/// per template and r_ps.
inline std::string summarize_rank_x(std::span<const MetricReport> rows,
                                    std::span<const MetricReport> rank_rows) {
  if (rank_rows.empty()) return {};
  const auto means = mean_metrics(rows);
  const auto rank_means = mean_metrics(rank_rows);
  std::ostringstream out;
  out << "\nMinMaxLTTB second step: original x vs rank x\n";
  out << "template        r_ps  pem20_x     pem20_rank  d_pem20     dssim_x     dssim_rank\n";
  char line[160];
  for (const auto& [key, r] : rank_means) {
    const auto& [tpl, algo, r_ps] = key;
    const auto it = means.find({tpl, "minmaxlttb", r_ps});
    if (it == means.end()) continue;
    const auto& m = it->second;
    std::snprintf(line, sizeof line, "%-15s %4zu  %10.4f  %10.4f  %+10.4f  %10.4f  %10.4f\n",
                  tpl.c_str(), r_ps, m.pem20, r.pem20, r.pem20 - m.pem20, m.dssim, r.dssim);
    out << line;
  }
  return out.str();
}

}  // namespace tsdown

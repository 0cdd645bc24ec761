// tsdown: downsample, generate, evaluate and benchmark time series from the
// command line.
//
// Exit codes: 0 ok, 1 I/O error, 2 validation error, 3 partial failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsdown/tsdown.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitPartial = 3;

struct SeriesIo {
  std::string format = "auto";  // auto | csv | bin
};

tsdown::TimeSeries read_series(const std::string& path, const std::string& format) {
  if (format == "csv") return tsdown::read_series_csv(path);
  if (format == "bin") return tsdown::read_series_binary(path);
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw tsdown::IoError("cannot open '" + path + "' for reading");
  char magic[4] = {};
  probe.read(magic, 4);
  if (probe.gcount() == 4 && std::string_view(magic, 4) == tsdown::kBinaryMagic) {
    return tsdown::read_series_binary(path);
  }
  return tsdown::read_series_csv(path);
}

void write_series(const std::string& path, const std::string& format, tsdown::SeriesView s,
                  std::span<const std::size_t> indices = {}) {
  const bool binary = format == "bin";
  if (path.empty() || path == "-") {
    if (binary) {
      const std::string buf = tsdown::encode_series_binary(s, indices);
      std::cout.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    } else {
      tsdown::write_series_csv(std::cout, s, indices);
    }
    std::cout.flush();
    return;
  }
  if (binary) {
    tsdown::write_series_binary(path, s, indices);
  } else {
    tsdown::write_series_csv(path, s, indices);
  }
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw tsdown::IoError("cannot open '" + path + "' for writing");
  return out;
}

std::pair<std::size_t, std::size_t> parse_canvas(const std::string& spec) {
  const auto x = spec.find('x');
  if (x == std::string::npos) throw CLI::ValidationError("--canvas", "expected WxH, got " + spec);
  try {
    return {std::stoul(spec.substr(0, x)), std::stoul(spec.substr(x + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--canvas", "expected WxH, got " + spec);
  }
}

// ---------------------------------------------------------------------------

struct DownsampleArgs {
  std::string input;
  std::string output = "-";
  std::string algo = "minmaxlttb";
  std::size_t n_out = 0;
  std::size_t ratio = 4;
  bool parallel = false;
  std::size_t threads = tsdown::hardware_threads();
  bool indices_only = false;
  SeriesIo io;
};

int cmd_downsample(const DownsampleArgs& a) {
  tsdown::DownsampleConfig config;
  config.algorithm = tsdown::parse_algorithm(a.algo);
  config.n_out = a.n_out;
  config.r_ps = a.ratio;
  config.parallel = a.parallel;
  config.threads = a.threads;

  // Everything that does not depend on the data is checked before reading it.
  tsdown::validate_config(std::numeric_limits<std::size_t>::max(), config).throw_if_error();
  const tsdown::TimeSeries series = read_series(a.input, a.io.format);
  tsdown::validate(series, config).throw_if_error();

  const auto start = std::chrono::steady_clock::now();
  const tsdown::SelectedIndices idx = tsdown::downsample_unchecked(series.view(), config);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (a.indices_only) {
    if (a.output.empty() || a.output == "-") {
      tsdown::write_indices_csv(std::cout, idx);
    } else {
      auto out = open_or_throw(a.output);
      tsdown::write_indices_csv(out, idx);
    }
  } else {
    write_series(a.output, a.io.format, series.view(), idx);
  }
  std::fprintf(stderr, "%s: selected %zu of %zu points in %.3f ms\n", a.algo.c_str(), idx.size(),
               series.size(), ms);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind = "white_noise";
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string output = "-";
  tsdown::TemplateParams params;
  SeriesIo io;
};

int cmd_generate(const GenerateArgs& a) {
  const tsdown::TimeSeries s =
      tsdown::generate({tsdown::parse_template_kind(a.kind), a.n, a.seed, a.params});
  write_series(a.output, a.io.format == "auto" ? "csv" : a.io.format, s.view());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::vector<std::string> templates = {"white_noise", "random_walk", "sine_noise", "ecg_like",
                                        "bouncing_ball"};
  std::size_t n = 100'000;
  std::uint64_t seed = 0;
  std::vector<std::string> algos = {"lttb", "minmaxlttb"};
  std::vector<std::size_t> ratios = {2, 4, 6};
  std::vector<std::size_t> n_outs;
  std::string canvas = "800x400";
  std::size_t mask_kernel = 3;
  int margin = 20;
  std::size_t threads = tsdown::hardware_threads();
  std::string output_dir = "eval_out";
  bool dump_images = false;
  bool rank_x = true;
};

int cmd_evaluate(const EvaluateArgs& a) {
  tsdown::EvalOptions opt;
  std::tie(opt.width, opt.height) = parse_canvas(a.canvas);
  if (a.mask_kernel % 2 == 0) {
    throw tsdown::Error(tsdown::ErrorCode::kBadKernel,
                        "mask kernel must be odd, got " + std::to_string(a.mask_kernel));
  }
  opt.mask_kernel = a.mask_kernel;
  opt.margin = a.margin;
  opt.rank_x_variant = a.rank_x;
  opt.threads = a.threads;
  if (!a.n_outs.empty()) opt.n_out_grid = a.n_outs;
  std::vector<tsdown::Algorithm> algos;
  for (const auto& name : a.algos) algos.push_back(tsdown::parse_algorithm(name));
  opt.candidates = tsdown::make_candidates(algos, a.ratios);

  std::vector<tsdown::NamedSeries> templates;
  for (const auto& t : a.templates) {
    std::optional<tsdown::TemplateKind> kind;
    try {
      kind = tsdown::parse_template_kind(t);
    } catch (const tsdown::Error&) {
    }
    if (kind) {
      templates.push_back({t, tsdown::generate({*kind, a.n, a.seed, {}})});
    } else {
      templates.push_back({std::filesystem::path(t).stem().string(), read_series(t, "auto")});
    }
  }

  std::filesystem::create_directories(a.output_dir);
  if (a.dump_images) {
    opt.dump_dir = a.output_dir + "/images";
    std::filesystem::create_directories(opt.dump_dir);
  }

  const tsdown::EvalOutcome outcome = tsdown::evaluate(templates, opt);
  {
    auto out = open_or_throw(a.output_dir + "/metrics.csv");
    tsdown::write_metrics_csv(out, outcome.reports);
  }
  const std::string summary = tsdown::summarize(outcome.reports) +
                              tsdown::summarize_rank_x(outcome.reports, outcome.rank_x_reports);
  {
    auto out = open_or_throw(a.output_dir + "/summary.txt");
    out << summary;
  }
  std::cout << summary;
  for (const auto& f : outcome.failures) {
    std::fprintf(stderr, "failed: %s %s r_ps=%zu n_out=%zu: %s\n", f.template_id.c_str(),
                 f.algorithm.c_str(), f.r_ps, f.n_out, f.message.c_str());
  }
  std::fprintf(stderr, "wrote %zu metric rows to %s/metrics.csv\n", outcome.reports.size(),
               a.output_dir.c_str());
  return outcome.failures.empty() ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string grid = "default";
  std::vector<std::size_t> sizes;
  std::size_t n_out = 2000;
  std::size_t ratio = 4;
  std::size_t threads = tsdown::hardware_threads();
  std::size_t reps = 7;
  std::string kind = "random_walk";
  std::uint64_t seed = 0;
  std::string output = "-";
  std::string summary;
};

int cmd_bench(const BenchArgs& a) {
  tsdown::BenchOptions opt;
  if (a.grid == "quick") opt.sizes = {10'000, 30'000, 100'000, 300'000};
  if (!a.sizes.empty()) opt.sizes = a.sizes;
  opt.repetitions = a.reps;
  opt.kind = tsdown::parse_template_kind(a.kind);
  opt.seed = a.seed;
  opt.on_result = [](const tsdown::BenchResult& r) {
    std::fprintf(stderr, "%-32s N=%-9zu median %.6f s  iqr %.6f s\n", r.config.label().c_str(),
                 r.n, r.median_s, r.iqr_s);
  };
  auto configs = tsdown::default_bench_configs(a.threads);
  for (auto& c : configs) {
    c.n_out = a.n_out;
    c.r_ps = a.ratio;
  }
  for (const auto& c : configs) {
    tsdown::validate_config(*std::min_element(opt.sizes.begin(), opt.sizes.end()),
                            c.downsample_config())
        .throw_if_error();
  }

  const auto results = tsdown::run_bench(configs, opt);
  if (a.output.empty() || a.output == "-") {
    tsdown::write_bench_csv(std::cout, results);
  } else {
    auto out = open_or_throw(a.output);
    tsdown::write_bench_csv(out, results);
  }
  const tsdown::ScalingReport report = tsdown::fit_and_report(results);
  if (!a.summary.empty()) {
    auto out = open_or_throw(a.summary);
    out << report.summary;
  }
  (a.output.empty() || a.output == "-" ? std::cerr : std::cout) << report.summary;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Value-preserving time series downsampling (MinMaxLTTB and baselines)"};
  app.require_subcommand(1);
  const std::vector<std::string> algo_names = {"everynth", "minmax", "m4", "lttb", "minmaxlttb"};

  DownsampleArgs ds;
  auto* ds_cmd = app.add_subcommand("downsample", "Select n_out points from a series");
  ds_cmd->add_option("input", ds.input, "Input series (CSV x,y or TSB1 binary)")
      ->required();
  ds_cmd->add_option("-o,--output", ds.output, "Output path, '-' for stdout");
  ds_cmd->add_option("--algo", ds.algo, "Algorithm")->check(CLI::IsMember(algo_names));
  ds_cmd->add_option("--n-out", ds.n_out, "Number of output points")->required();
  ds_cmd->add_option("--ratio", ds.ratio, "MinMaxLTTB preselection ratio (1 or even)");
  ds_cmd->add_flag("--parallel", ds.parallel, "Use multiple threads where supported");
  ds_cmd->add_option("--threads", ds.threads, "Worker threads for --parallel");
  ds_cmd->add_flag("--indices-only", ds.indices_only, "Write selected indices instead of points");
  ds_cmd->add_option("--format", ds.io.format, "Series format")
      ->check(CLI::IsMember({"auto", "csv", "bin"}));

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic template series");
  gen_cmd->add_option("--kind", gen.kind, "Template kind")
      ->check(CLI::IsMember({"white_noise", "random_walk", "sine_noise", "ecg_like",
                             "bouncing_ball"}));
  gen_cmd->add_option("--n", gen.n, "Number of samples")->check(CLI::Range(2ul, 1ul << 40));
  gen_cmd->add_option("--seed", gen.seed, "PRNG seed");
  gen_cmd->add_option("-o,--output", gen.output, "Output path, '-' for stdout");
  gen_cmd->add_option("--format", gen.io.format, "Output format")
      ->check(CLI::IsMember({"auto", "csv", "bin"}));
  gen_cmd->add_option("--amplitude", gen.params.amplitude, "Amplitude / step size");
  gen_cmd->add_option("--noise", gen.params.noise, "Relative noise level");
  gen_cmd->add_option("--cycles", gen.params.cycles, "sine_noise periods");
  gen_cmd->add_option("--beats", gen.params.beats, "ecg_like beats");
  gen_cmd->add_option("--bounces", gen.params.bounces, "bouncing_ball floor contacts");
  gen_cmd->add_option("--restitution", gen.params.restitution, "bouncing_ball restitution");

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Score downsamplers on rasterized line charts");
  ev_cmd->add_option("--templates", ev.templates, "Template kinds or series files")->delimiter(',');
  ev_cmd->add_option("--n", ev.n, "Length of generated templates");
  ev_cmd->add_option("--seed", ev.seed, "PRNG seed for generated templates");
  ev_cmd->add_option("--algos", ev.algos, "Algorithms")
      ->delimiter(',')
      ->check(CLI::IsMember(algo_names));
  ev_cmd->add_option("--ratios", ev.ratios, "MinMaxLTTB preselection ratios")->delimiter(',');
  ev_cmd->add_option("--n-out", ev.n_outs, "n_out grid (default: 10 log-spaced in [200, 2000])")
      ->delimiter(',');
  ev_cmd->add_option("--canvas", ev.canvas, "Canvas size WxH");
  ev_cmd->add_option("--mask-kernel", ev.mask_kernel, "Odd conv-mask kernel size");
  ev_cmd->add_option("--margin", ev.margin, "PEM intensity margin")->check(CLI::Range(0, 255));
  ev_cmd->add_option("--threads", ev.threads, "Worker threads");
  ev_cmd->add_option("-o,--output-dir", ev.output_dir, "Directory for metrics.csv and summary.txt");
  ev_cmd->add_flag("--dump-images", ev.dump_images, "Write PGM images under <output-dir>/images");
  ev_cmd->add_flag("--rank-x,!--no-rank-x", ev.rank_x,
                   "Also compare MinMaxLTTB against its rank-x variant in the summary");

  BenchArgs bn;
  auto* bn_cmd = app.add_subcommand("bench", "Time LTTB vs MinMaxLTTB over a range of N");
  bn_cmd->add_option("--grid", bn.grid, "N grid")->check(CLI::IsMember({"default", "quick"}));
  bn_cmd->add_option("--sizes", bn.sizes, "Explicit N values")->delimiter(',');
  bn_cmd->add_option("--n-out", bn.n_out, "Output size");
  bn_cmd->add_option("--ratio", bn.ratio, "MinMaxLTTB preselection ratio");
  bn_cmd->add_option("--threads", bn.threads, "Threads for the parallel run");
  bn_cmd->add_option("--reps", bn.reps, "Warm repetitions per measurement (>= 5)");
  bn_cmd->add_option("--kind", bn.kind, "Template kind used as input");
  bn_cmd->add_option("--seed", bn.seed, "PRNG seed");
  bn_cmd->add_option("-o,--output", bn.output, "CSV path, '-' for stdout");
  bn_cmd->add_option("--summary", bn.summary, "Also write the summary to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*ds_cmd) return cmd_downsample(ds);
    if (*gen_cmd) return cmd_generate(gen);
    if (*ev_cmd) return cmd_evaluate(ev);
    if (*bn_cmd) return cmd_bench(bn);
  } catch (const tsdown::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const tsdown::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}

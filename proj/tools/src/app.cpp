// Copyright 2026 The qdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qdist/cli/app.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qdist/bounds.hpp"
#include "qdist/cli/figures.hpp"
#include "qdist/dynamics.hpp"
#include "qdist/ensemble.hpp"
#include "qdist/io.hpp"
#include "qdist/spectra.hpp"
#include "qdist/version.hpp"

namespace qdist::cli {
namespace {

namespace fs = std::filesystem;

// Raised for bad arguments that CLI11 itself cannot see.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int parse_int(std::string_view s) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return value;
}

std::string default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return "qdist_out";
}

std::string join_command(const std::vector<std::string>& args) {
  std::string s = "qdist";
  for (const std::string& a : args) {
    s += ' ';
    s += a;
  }
  return s;
}

struct EnsembleFlags {
  std::string dims = "2..20";
  std::string kind = "both";
  std::int64_t samples = 0;
  std::uint64_t seed = 1;
  double omega = 1.0;
  double cap = 10.0;
  int grid = 32;
  unsigned workers = 0;
};

std::vector<CLI::Option*> add_ensemble_flags(CLI::App* cmd, EnsembleFlags& f) {
  return {
      cmd->add_option("--dims", f.dims, "Dimensions, e.g. 2..20 or 2,5,10")->capture_default_str(),
      cmd->add_option("--class", f.kind, "Spectrum class")
          ->check(CLI::IsMember({"harmonic", "atomic", "both"}))
          ->capture_default_str(),
      cmd->add_option("--samples", f.samples, "Samples per (dimension, class)")
          ->capture_default_str(),
      cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str(),
      cmd->add_option("--omega", f.omega, "Frequency unit omega")->capture_default_str(),
      cmd->add_option("--cap", f.cap, "Atomic search cap K (window K N^3 pi / omega)")
          ->capture_default_str(),
      cmd->add_option("--grid", f.grid, "Grid points per fastest period")
          ->capture_default_str(),
  };
}

std::vector<SpectrumClass> parse_classes(const std::string& kind) {
  if (kind == "both") return {SpectrumClass::Harmonic, SpectrumClass::Atomic};
  return {parse_spectrum_class(kind)};
}

RunConfig to_config(const EnsembleFlags& f) {
  RunConfig cfg;
  try {
    cfg.dims = parse_dims(f.dims);
    cfg.classes = parse_classes(f.kind);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.samples_per_dim = f.samples;
  cfg.master_seed = f.seed;
  cfg.omega = f.omega;
  cfg.cap.multiplier = f.cap;
  cfg.grid.points_per_fastest_period = f.grid;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

struct RunFlags {
  EnsembleFlags ensemble;
  std::string output_dir;
  std::string normalization = "total";
  int epsilon_points = 101;
  std::string from_manifest;
};

int cmd_run(const RunFlags& f, const std::string& command, std::ostream& out) {
  RunConfig cfg;
  Normalization norm = parse_normalization(f.normalization);
  int eps_points = f.epsilon_points;
  if (!f.from_manifest.empty()) {
    const io::RunManifest prior = io::manifest_from_json(read_file(f.from_manifest));
    cfg = prior.config;
    norm = prior.normalization;
    eps_points = prior.epsilon_points;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    cfg = to_config(f.ensemble);
  }
  if (eps_points < 2) throw UsageError("--epsilon-points must be >= 2");

  const std::string started = io::utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  RunOptions options;
  options.workers = f.ensemble.workers;
  const EnsembleResult result = run_ensemble(cfg, options);

  const fs::path dir = f.output_dir;
  io::RunManifest m = io::write_run_outputs(result, dir, norm, eps_points);
  m.tool_version = kVersion;
  m.command = command;
  m.started = started;
  m.finished = io::utc_timestamp();
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.workers = f.ensemble.workers;
  write_file(dir / "manifest.json", io::manifest_to_json(m));

  for (const CellResult& c : result.cells) {
    const EnsembleStats st = c.aggregate.summary();
    out << fmt::format("{:<8} N={:<3} samples={} mean_d={:.6f} std_d={:.6f}{}\n",
                       to_string(c.kind), c.dim, st.n, st.mean_d, st.std_d,
                       c.window.truncated ? " truncated" : "");
  }
  out << fmt::format("wrote {} cells to {} in {:.1f} s\n", result.cells.size(), dir.string(),
                     m.wall_seconds);
  return kExitOk;
}

struct ReproduceFlags {
  std::string figure;
  std::string output_dir;
  std::string dims;
  std::int64_t samples = 0;
  EnsembleFlags ensemble;
  std::string normalization;
  double log_floor = 1e-6;
};

int cmd_reproduce(const ReproduceFlags& f, const std::string& command, std::ostream& out) {
  ReproduceOptions o;
  const FigureId id = parse_figure_id(f.figure);
  try {
    if (!f.dims.empty()) o.dims = parse_dims(f.dims);
    if (!f.normalization.empty()) o.normalization = parse_normalization(f.normalization);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (f.samples > 0) o.samples = f.samples;
  o.seed = f.ensemble.seed;
  o.omega = f.ensemble.omega;
  o.cap = f.ensemble.cap;
  o.grid_density = f.ensemble.grid;
  o.workers = f.ensemble.workers;
  o.log_floor = f.log_floor;
  o.command = command;
  try {
    figure_config(id, o).validate();
    if (!(o.log_floor > 0.0 && o.log_floor < 1.0)) {
      throw std::invalid_argument("--log-floor must lie in (0, 1)");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const ReproduceOutcome r = reproduce_figure(id, o, f.output_dir);
  out << fmt::format("{}: wrote {} and {}\n", f.figure, r.spec.inputs.front().string(),
                     r.spec.output.string());
  for (const auto& [name, value] : r.manifest.metrics) {
    out << fmt::format("{} = {}\n", name, io::format_real(value));
  }
  return kExitOk;
}

struct BoundsFlags {
  EnsembleFlags ensemble;
  bool strict = false;
  bool per_sample = false;
};

int cmd_bounds(const BoundsFlags& f, std::ostream& out) {
  const RunConfig cfg = to_config(f.ensemble);
  RunOptions options;
  options.workers = f.ensemble.workers;
  options.strict_bounds = f.strict;
  options.keep_reports = f.per_sample;
  const EnsembleResult result = run_ensemble(cfg, options);
  out << io::bounds_summary_json(result, f.per_sample) << '\n';
  return kExitOk;
}

}  // namespace

std::vector<int> parse_dims(std::string_view text) {
  std::vector<int> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    if (item.empty()) throw std::invalid_argument("empty entry in dimension list");
    if (const std::size_t dots = item.find(".."); dots != std::string_view::npos) {
      const int lo = parse_int(item.substr(0, dots));
      const int hi = parse_int(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("descending range: " + std::string(item));
      for (int n = lo; n <= hi; ++n) dims.push_back(n);
    } else {
      dims.push_back(parse_int(item));
    }
    pos = comma + 1;
  }
  std::sort(dims.begin(), dims.end());
  if (std::adjacent_find(dims.begin(), dims.end()) != dims.end()) {
    throw std::invalid_argument("repeated dimension in '" + std::string(text) + "'");
  }
  for (int n : dims) {
    if (n < 2) throw std::invalid_argument("dimensions must be >= 2");
  }
  return dims;
}

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum distinguishability of randomly sampled quantum states", "qdist"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunFlags run;
  run.output_dir = default_output_dir();
  run.ensemble.samples = RunConfig{}.samples_per_dim;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a Monte Carlo ensemble and write CSVs");
  const std::vector<CLI::Option*> run_opts = add_ensemble_flags(run_cmd, run.ensemble);
  run_cmd->add_option("--workers", run.ensemble.workers, "Worker threads (0 = all cores)");
  run_cmd->add_option("-o,--output-dir", run.output_dir, "Output directory")
      ->capture_default_str();
  CLI::Option* norm_opt =
      run_cmd->add_option("--normalization", run.normalization, "Histogram normalization")
          ->check(CLI::IsMember({"total", "top", "raw"}))
          ->capture_default_str();
  CLI::Option* eps_opt =
      run_cmd->add_option("--epsilon-points", run.epsilon_points, "Threshold curve points")
          ->capture_default_str();
  CLI::Option* manifest_opt =
      run_cmd->add_option("--from-manifest", run.from_manifest,
                          "Rerun the configuration recorded in a manifest")
          ->check(CLI::ExistingFile);
  for (CLI::Option* o : run_opts) manifest_opt->excludes(o);
  manifest_opt->excludes(norm_opt);
  manifest_opt->excludes(eps_opt);

  ReproduceFlags rep;
  rep.output_dir = default_output_dir();
  CLI::App* rep_cmd = app.add_subcommand("reproduce", "Regenerate a figure's data and SVG");
  rep_cmd->add_option("figure", rep.figure, "fig1 .. fig7")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}));
  rep_cmd->add_option("--dims", rep.dims, "Override the figure's dimensions");
  rep_cmd->add_option("--samples", rep.samples, "Override samples per cell");
  rep_cmd->add_option("--seed", rep.ensemble.seed, "Master seed")->capture_default_str();
  rep_cmd->add_option("--omega", rep.ensemble.omega, "Frequency unit")->capture_default_str();
  rep_cmd->add_option("--cap", rep.ensemble.cap, "Atomic search cap K")->capture_default_str();
  rep_cmd->add_option("--grid", rep.ensemble.grid, "Grid points per fastest period")
      ->capture_default_str();
  rep_cmd->add_option("--workers", rep.ensemble.workers, "Worker threads (0 = all cores)");
  rep_cmd->add_option("--normalization", rep.normalization, "Histogram normalization")
      ->check(CLI::IsMember({"total", "top", "raw"}));
  rep_cmd->add_option("--log-floor", rep.log_floor,
                      "Display floor for empty histogram bins, relative to the maximum")
      ->capture_default_str();
  rep_cmd->add_option("-o,--output-dir", rep.output_dir, "Output directory")
      ->capture_default_str();

  std::string lcm_arg;
  CLI::App* lcm_cmd = app.add_subcommand("lcm", "Print lcm(1^2, ..., N^2)");
  lcm_cmd->add_option("N", lcm_arg, "Number of levels")->required();

  double eps = 0.0;
  CLI::App* analytic_cmd =
      app.add_subcommand("analytic", "Print the two-level P(D >= 1 - epsilon)");
  analytic_cmd->add_option("epsilon", eps, "Threshold epsilon in [0, 1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0));

  BoundsFlags bnd;
  bnd.ensemble.dims = "2..10";
  bnd.ensemble.samples = 10000;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "Check quantum speed limits and print a JSON summary");
  add_ensemble_flags(bounds_cmd, bnd.ensemble);
  bounds_cmd->add_option("--workers", bnd.ensemble.workers, "Worker threads (0 = all cores)");
  bounds_cmd->add_flag("--strict", bnd.strict,
                       "Also check the first time D reaches (1 - eta) d_max");
  bounds_cmd->add_flag("--per-sample", bnd.per_sample, "Include every per-sample report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = join_command(args);
  try {
    if (run_cmd->parsed()) return cmd_run(run, command, out);
    if (rep_cmd->parsed()) return cmd_reproduce(rep, command, out);
    if (lcm_cmd->parsed()) {
      int n = 0;
      try {
        n = parse_int(lcm_arg);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (n < 1) throw UsageError("N must be >= 1");
      out << lcm_of_squares(n) << '\n';
      return kExitOk;
    }
    if (analytic_cmd->parsed()) {
      out << io::format_real(n2_threshold_probability(eps)) << '\n';
      return kExitOk;
    }
    if (bounds_cmd->parsed()) return cmd_bounds(bnd, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace qdist::cli

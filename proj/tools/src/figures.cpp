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


#include "qdist/cli/figures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "qdist/dynamics.hpp"
#include "qdist/spectra.hpp"
#include "qdist/version.hpp"

namespace qdist::cli {
namespace {

namespace fs = std::filesystem;
using io::format_real;

const std::vector<int> kRepresentativeDims = {2, 3, 4, 5, 10, 20};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string dim_label(int dim) { return fmt::format("N = {}", dim); }

io::ManifestCell manifest_cell(const CellResult& c) {
  io::ManifestCell mc;
  mc.dim = c.dim;
  mc.kind = c.kind;
  mc.window_hi = c.window.t_hi;
  mc.window_truncated = c.window.truncated;
  mc.truncated_fraction = c.aggregate.summary().truncated_fraction;
  return mc;
}

std::string fig1(const EnsembleResult& result, svg::Figure& figure, io::RunManifest& m) {
  const CellResult& cell = result.cells.front();
  std::vector<double> eps;
  for (int k = 1; k <= 19; ++k) eps.push_back(k / 20.0);
  const ThresholdCurve curve = threshold_curve(cell.d_values, eps);

  std::ostringstream csv;
  csv << "epsilon,analytic,empirical,standard_error\n";
  double max_gap = 0.0;
  svg::Series mc{"Monte Carlo", {}, {}, {}, svg::SeriesStyle::Markers};
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double exact = n2_threshold_probability(eps[k]);
    max_gap = std::max(max_gap, std::abs(curve.probabilities[k] - exact));
    csv << format_real(eps[k]) << ',' << format_real(exact) << ','
        << format_real(curve.probabilities[k]) << ',' << format_real(curve.standard_errors[k])
        << '\n';
    mc.x.push_back(eps[k]);
    mc.y.push_back(curve.probabilities[k]);
  }
  svg::Series theory{"closed form", {}, {}, {}, svg::SeriesStyle::Line};
  for (int k = 0; k <= 200; ++k) {
    const double e = k / 200.0;
    theory.x.push_back(e);
    theory.y.push_back(n2_threshold_probability(e));
  }
  svg::Panel panel;
  panel.title = "N = 2";
  panel.x_label = "epsilon";
  panel.y_label = "P(D >= 1 - epsilon)";
  panel.x_range = svg::Range{0.0, 1.0};
  panel.y_range = svg::Range{0.0, 1.0};
  panel.series = {std::move(theory), std::move(mc)};
  figure.panels.push_back(std::move(panel));

  m.metrics["max_gap"] = max_gap;
  m.metrics["samples"] = static_cast<double>(cell.d_values.size());
  return csv.str();
}

std::string histograms(const EnsembleResult& result, Normalization mode, double floor,
                       svg::Figure& figure) {
  std::ostringstream csv;
  csv << "dim,bin_lower,count,normalized\n";
  svg::Panel panel;
  panel.x_label = "D";
  panel.y_label = fmt::format("population ({})", to_string(mode));
  panel.y_scale = svg::AxisScale::Log;
  panel.x_range = svg::Range{0.0, 1.0};
  for (const CellResult& c : result.cells) {
    const Histogram& h = c.aggregate.histogram;
    const std::vector<double> values = h.normalized(mode);
    const double top = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    svg::Series s{dim_label(c.dim), {}, {}, {}, svg::SeriesStyle::Line};
    for (std::size_t k = 0; k < h.bins(); ++k) {
      csv << c.dim << ',' << format_real(h.bin_lower(k)) << ',' << h.counts()[k] << ','
          << format_real(values[k]) << '\n';
      s.x.push_back(h.bin_lower(k) + 0.5 * h.bin_width());
      s.y.push_back(values[k] > 0.0 ? values[k] : floor * top);
    }
    panel.series.push_back(std::move(s));
  }
  figure.panels.push_back(std::move(panel));
  return csv.str();
}

std::string thresholds(const EnsembleResult& result, svg::Figure& figure) {
  const std::vector<double> eps = uniform_epsilon_grid(101);
  std::ostringstream csv;
  csv << "dim,epsilon,probability,standard_error\n";
  svg::Panel panel;
  panel.x_label = "epsilon";
  panel.y_label = "P(D >= 1 - epsilon)";
  panel.x_range = svg::Range{0.0, 1.0};
  panel.y_range = svg::Range{0.0, 1.0};
  for (const CellResult& c : result.cells) {
    const ThresholdCurve curve = threshold_curve(c.d_values, eps);
    svg::Series s{dim_label(c.dim), {}, {}, {}, svg::SeriesStyle::Line};
    for (std::size_t k = 0; k < eps.size(); ++k) {
      csv << c.dim << ',' << format_real(eps[k]) << ',' << format_real(curve.probabilities[k])
          << ',' << format_real(curve.standard_errors[k]) << '\n';
      s.x.push_back(eps[k]);
      s.y.push_back(curve.probabilities[k]);
    }
    panel.series.push_back(std::move(s));
  }
  figure.panels.push_back(std::move(panel));
  return csv.str();
}

std::string fig4(int first, int last, svg::Figure& figure, io::RunManifest& m) {
  std::ostringstream csv;
  io::write_lcm_csv(csv, first, last);
  svg::Series s{"lcm(1, 4, ..., N^2)", {}, {}, {}, svg::SeriesStyle::LineMarkers};
  for (int n = first; n <= last; ++n) {
    const BigInt v = lcm_of_squares(n);
    s.x.push_back(n);
    s.y.push_back(v.convert_to<double>());
  }
  svg::Panel panel;
  panel.x_label = "N";
  panel.y_label = "LCM";
  panel.y_scale = svg::AxisScale::Log;
  panel.series.push_back(std::move(s));
  figure.panels.push_back(std::move(panel));
  m.metrics["log10_lcm_last"] = io::log10_big(lcm_of_squares(last));
  return csv.str();
}

std::string fig6(const EnsembleResult& result, svg::Figure& figure, io::RunManifest& m) {
  std::ostringstream csv;
  csv << "dim,class,samples,mean_d,std_d,standard_error\n";
  for (SpectrumClass kind : result.config.classes) {
    svg::Panel panel;
    panel.title = std::string(to_string(kind));
    panel.x_label = "N";
    panel.y_label = "<D>";
    panel.guides = {1.0};
    svg::Series s{"<D> +/- sigma", {}, {}, {}, svg::SeriesStyle::ErrorBars};
    for (const CellResult& c : result.cells) {
      if (c.kind != kind) continue;
      const EnsembleStats st = c.aggregate.summary();
      const double se = st.n > 0 ? st.std_d / std::sqrt(static_cast<double>(st.n)) : 0.0;
      csv << c.dim << ',' << to_string(c.kind) << ',' << st.n << ',' << format_real(st.mean_d)
          << ',' << format_real(st.std_d) << ',' << format_real(se) << '\n';
      s.x.push_back(c.dim);
      s.y.push_back(st.mean_d);
      s.y_err.push_back(st.std_d);
    }
    panel.series.push_back(std::move(s));
    figure.panels.push_back(std::move(panel));
  }
  for (int dim : {10, 20}) {
    const auto has = [&](SpectrumClass k) {
      return std::any_of(result.cells.begin(), result.cells.end(),
                         [&](const CellResult& c) { return c.dim == dim && c.kind == k; });
    };
    if (!has(SpectrumClass::Harmonic) || !has(SpectrumClass::Atomic)) continue;
    const EnsembleStats h = result.cell(dim, SpectrumClass::Harmonic).aggregate.summary();
    const EnsembleStats a = result.cell(dim, SpectrumClass::Atomic).aggregate.summary();
    const double pooled = std::sqrt(h.std_d * h.std_d / static_cast<double>(h.n) +
                                    a.std_d * a.std_d / static_cast<double>(a.n));
    m.metrics[fmt::format("atomic_minus_harmonic_N{}", dim)] = a.mean_d - h.mean_d;
    if (pooled > 0.0) {
      m.metrics[fmt::format("atomic_minus_harmonic_N{}_in_se", dim)] =
          (a.mean_d - h.mean_d) / pooled;
    }
  }
  return csv.str();
}

std::string figure_title(FigureId id) {
  switch (id) {
    case FigureId::Fig1: return "Two-level threshold probability";
    case FigureId::Fig2: return "Harmonic populations of maximum distinguishability";
    case FigureId::Fig3: return "Harmonic threshold probability";
    case FigureId::Fig4: return "Lowest common multiple of 1, 4, ..., N^2";
    case FigureId::Fig5: return "Atomic populations of maximum distinguishability";
    case FigureId::Fig6: return "Average maximum distinguishability";
    case FigureId::Fig7: return "Atomic threshold probability";
  }
  return {};
}

}  // namespace

std::string_view to_string(FigureId id) {
  switch (id) {
    case FigureId::Fig1: return "fig1";
    case FigureId::Fig2: return "fig2";
    case FigureId::Fig3: return "fig3";
    case FigureId::Fig4: return "fig4";
    case FigureId::Fig5: return "fig5";
    case FigureId::Fig6: return "fig6";
    case FigureId::Fig7: return "fig7";
  }
  return "unknown";
}

FigureId parse_figure_id(std::string_view name) {
  for (FigureId id : {FigureId::Fig1, FigureId::Fig2, FigureId::Fig3, FigureId::Fig4,
                      FigureId::Fig5, FigureId::Fig6, FigureId::Fig7}) {
    if (to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown figure: " + std::string(name));
}

PlotSpec plot_spec(FigureId id, const fs::path& dir) {
  PlotSpec spec;
  spec.id = id;
  const std::string stem(to_string(id));
  spec.inputs = {dir / (stem + ".csv")};
  spec.output = dir / (stem + ".svg");
  switch (id) {
    case FigureId::Fig2:
    case FigureId::Fig4:
    case FigureId::Fig5:
      spec.y_scale = svg::AxisScale::Log;
      break;
    default:
      break;
  }
  return spec;
}

RunConfig figure_config(FigureId id, const ReproduceOptions& options) {
  RunConfig cfg;
  cfg.master_seed = options.seed;
  cfg.omega = options.omega;
  cfg.cap.multiplier = options.cap;
  cfg.grid.points_per_fastest_period = options.grid_density;
  cfg.samples_per_dim = 10000;
  switch (id) {
    case FigureId::Fig1:
      cfg.dims = {2};
      cfg.classes = {SpectrumClass::Harmonic};
      cfg.samples_per_dim = 100000;
      break;
    case FigureId::Fig2:
    case FigureId::Fig3:
      cfg.dims = kRepresentativeDims;
      cfg.classes = {SpectrumClass::Harmonic};
      break;
    case FigureId::Fig5:
    case FigureId::Fig7:
      cfg.dims = kRepresentativeDims;
      cfg.classes = {SpectrumClass::Atomic};
      break;
    case FigureId::Fig4:
    case FigureId::Fig6:
      cfg.dims = RunConfig::default_dims();
      break;
  }
  if (options.dims) cfg.dims = *options.dims;
  if (options.samples) cfg.samples_per_dim = *options.samples;
  return cfg;
}

ReproduceOutcome reproduce_figure(FigureId id, const ReproduceOptions& options,
                                  const fs::path& dir) {
  const RunConfig cfg = figure_config(id, options);
  cfg.validate();
  if (!(options.log_floor > 0.0 && options.log_floor < 1.0)) {
    throw std::invalid_argument("log floor must lie in (0, 1)");
  }

  ReproduceOutcome outcome;
  outcome.spec = plot_spec(id, dir);
  io::RunManifest& m = outcome.manifest;
  m.config = cfg;
  m.tool_version = kVersion;
  m.command = options.command;
  m.started = io::utc_timestamp();
  m.workers = options.workers;
  m.normalization = id == FigureId::Fig5 ? Normalization::TopBinOne : Normalization::TotalOne;
  if (options.normalization) m.normalization = *options.normalization;
  const auto t0 = std::chrono::steady_clock::now();

  svg::Figure figure;
  figure.title = figure_title(id);
  std::string csv;
  if (id == FigureId::Fig4) {
    const auto [lo, hi] = std::minmax_element(cfg.dims.begin(), cfg.dims.end());
    csv = fig4(*lo, *hi, figure, m);
  } else {
    RunOptions run;
    run.workers = options.workers;
    const EnsembleResult result = run_ensemble(cfg, run);
    for (const CellResult& c : result.cells) m.cells.push_back(manifest_cell(c));
    switch (id) {
      case FigureId::Fig1: csv = fig1(result, figure, m); break;
      case FigureId::Fig2:
      case FigureId::Fig5: csv = histograms(result, m.normalization, options.log_floor, figure); break;
      case FigureId::Fig3:
      case FigureId::Fig7: csv = thresholds(result, figure); break;
      case FigureId::Fig6: csv = fig6(result, figure, m); break;
      case FigureId::Fig4: break;
    }
  }
  if (figure.panels.size() == 1) {
    figure.panels.front().x_scale = outcome.spec.x_scale;
    figure.panels.front().y_scale = outcome.spec.y_scale;
  }

  fs::create_directories(dir);
  write_file(outcome.spec.inputs.front(), csv);
  write_file(outcome.spec.output, svg::render(figure));
  m.files = {outcome.spec.inputs.front().filename().string(),
             outcome.spec.output.filename().string()};
  m.finished = io::utc_timestamp();
  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file(dir / (std::string(to_string(id)) + "_manifest.json"), io::manifest_to_json(m));
  return outcome;
}

}  // namespace qdist::cli

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

#include "qdist/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace qdist::io {
namespace {

using nlohmann::json;

json grid_to_json(const GridConfig& g) {
  return {{"points_per_fastest_period", g.points_per_fastest_period},
          {"refine_tolerance", g.refine_tolerance},
          {"refine", g.refine}};
}

json config_to_json(const RunConfig& cfg) {
  json classes = json::array();
  for (SpectrumClass k : cfg.classes) classes.push_back(std::string(to_string(k)));
  return {{"dims", cfg.dims},
          {"classes", classes},
          {"samples_per_dim", cfg.samples_per_dim},
          {"omega", cfg.omega},
          {"master_seed", cfg.master_seed},
          {"grid", grid_to_json(cfg.grid)},
          {"cap_multiplier", cfg.cap.multiplier},
          {"bin_width", cfg.bin_width}};
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  if (j.contains("dims")) cfg.dims = j.at("dims").get<std::vector<int>>();
  if (j.contains("classes")) {
    cfg.classes.clear();
    for (const auto& k : j.at("classes")) {
      cfg.classes.push_back(parse_spectrum_class(k.get<std::string>()));
    }
  }
  if (j.contains("samples_per_dim")) cfg.samples_per_dim = j.at("samples_per_dim").get<std::int64_t>();
  if (j.contains("omega")) cfg.omega = j.at("omega").get<double>();
  if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (g.contains("points_per_fastest_period")) {
      cfg.grid.points_per_fastest_period = g.at("points_per_fastest_period").get<int>();
    }
    if (g.contains("refine_tolerance")) cfg.grid.refine_tolerance = g.at("refine_tolerance").get<double>();
    if (g.contains("refine")) cfg.grid.refine = g.at("refine").get<bool>();
  }
  if (j.contains("cap_multiplier")) cfg.cap.multiplier = j.at("cap_multiplier").get<double>();
  if (j.contains("bin_width")) cfg.bin_width = j.at("bin_width").get<double>();
  return cfg;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json bound_check_json(const BoundCheck& c) {
  return {{"bound", optional_number(c.bound)},
          {"applicable", c.applicable()},
          {"satisfied", c.satisfied}};
}

json counter_json(const BoundCounter& c) {
  return {{"applicable", c.applicable},
          {"violated", c.violated},
          {"violation_rate", c.violation_rate()}};
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  const std::vector<double> norm = hist.normalized();
  out << "bin_lower,count,normalized\n";
  for (std::size_t k = 0; k < hist.bins(); ++k) {
    out << format_real(hist.bin_lower(k)) << ',' << hist.counts()[k] << ','
        << format_real(norm[k]) << '\n';
  }
}

void write_threshold_csv(std::ostream& out, const ThresholdCurve& curve) {
  out << "epsilon,probability,standard_error\n";
  for (std::size_t k = 0; k < curve.epsilons.size(); ++k) {
    out << format_real(curve.epsilons[k]) << ',' << format_real(curve.probabilities[k])
        << ',' << format_real(curve.standard_errors[k]) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const EnsembleResult& result) {
  out << "dim,class,samples,mean_d,std_d,truncated_fraction,window_hi,"
         "mt_applicable,mt_violated,ml_applicable,ml_violated,"
         "modified_ml_applicable,modified_ml_violated\n";
  for (const CellResult& c : result.cells) {
    const EnsembleStats s = c.aggregate.summary();
    const BoundTally& b = c.aggregate.bounds;
    out << c.dim << ',' << to_string(c.kind) << ',' << s.n << ',' << format_real(s.mean_d)
        << ',' << format_real(s.std_d) << ',' << format_real(s.truncated_fraction) << ','
        << format_real(c.window.t_hi) << ',' << b.mandelstam_tamm.applicable << ','
        << b.mandelstam_tamm.violated << ',' << b.margolus_levitin.applicable << ','
        << b.margolus_levitin.violated << ',' << b.modified_ml.applicable << ','
        << b.modified_ml.violated << '\n';
  }
}

double log10_big(const BigInt& value) {
  if (value <= 0) throw std::domain_error("log10 of a non-positive integer");
  const std::string digits = value.str();
  // Leading 17 digits carry all the precision a double can hold.
  const std::size_t head = std::min<std::size_t>(17, digits.size());
  const double mantissa = std::stod(digits.substr(0, head));
  return std::log10(mantissa) + static_cast<double>(digits.size() - head);
}

void write_lcm_csv(std::ostream& out, int first, int last) {
  out << "n,lcm,log10_lcm\n";
  for (int n = first; n <= last; ++n) {
    const BigInt v = lcm_of_squares(n);
    out << n << ',' << v.str() << ',' << format_real(log10_big(v)) << '\n';
  }
}

std::string run_config_to_json(const RunConfig& cfg, int indent) {
  return config_to_json(cfg).dump(indent);
}

RunConfig run_config_from_json(std::string_view text) {
  return config_from_json(json::parse(text));
}

std::string manifest_to_json(const RunManifest& m, int indent) {
  json cells = json::array();
  for (const ManifestCell& c : m.cells) {
    cells.push_back({{"dim", c.dim},
                     {"class", std::string(to_string(c.kind))},
                     {"window_hi", c.window_hi},
                     {"window_truncated", c.window_truncated},
                     {"truncated_fraction", c.truncated_fraction},
                     {"histogram_csv", c.histogram_csv},
                     {"threshold_csv", c.threshold_csv}});
  }
  json j = {{"tool", "qdist"},
            {"tool_version", m.tool_version},
            {"command", m.command},
            {"started", m.started},
            {"finished", m.finished},
            {"wall_seconds", m.wall_seconds},
            {"workers", m.workers},
            {"normalization", std::string(to_string(m.normalization))},
            {"epsilon_points", m.epsilon_points},
            {"config", config_to_json(m.config)},
            {"cells", cells},
            {"files", m.files}};
  if (!m.metrics.empty()) j["metrics"] = m.metrics;
  return j.dump(indent);
}

RunManifest manifest_from_json(std::string_view text) {
  const json j = json::parse(text);
  RunManifest m;
  m.config = config_from_json(j.at("config"));
  m.tool_version = j.value("tool_version", "");
  m.command = j.value("command", "");
  m.started = j.value("started", "");
  m.finished = j.value("finished", "");
  m.wall_seconds = j.value("wall_seconds", 0.0);
  m.workers = j.value("workers", 0u);
  m.normalization = parse_normalization(j.value("normalization", "total"));
  m.epsilon_points = j.value("epsilon_points", 101);
  for (const auto& c : j.value("cells", json::array())) {
    ManifestCell cell;
    cell.dim = c.at("dim").get<int>();
    cell.kind = parse_spectrum_class(c.at("class").get<std::string>());
    cell.window_hi = c.value("window_hi", 0.0);
    cell.window_truncated = c.value("window_truncated", false);
    cell.truncated_fraction = c.value("truncated_fraction", 0.0);
    cell.histogram_csv = c.value("histogram_csv", "");
    cell.threshold_csv = c.value("threshold_csv", "");
    m.cells.push_back(std::move(cell));
  }
  m.files = j.value("files", std::vector<std::string>{});
  m.metrics = j.value("metrics", std::map<std::string, double>{});
  return m;
}

std::string bounds_summary_json(const EnsembleResult& result, bool include_reports,
                                int indent) {
  json cells = json::array();
  for (const CellResult& c : result.cells) {
    const BoundTally& b = c.aggregate.bounds;
    json cell = {{"dim", c.dim},
                 {"class", std::string(to_string(c.kind))},
                 {"samples", b.samples},
                 {"window_truncated", c.window.truncated},
                 {"mandelstam_tamm", counter_json(b.mandelstam_tamm)},
                 {"margolus_levitin", counter_json(b.margolus_levitin)},
                 {"modified_margolus_levitin", counter_json(b.modified_ml)}};
    if (b.strict_mandelstam_tamm.applicable > 0) {
      cell["strict_mandelstam_tamm"] = counter_json(b.strict_mandelstam_tamm);
    }
    if (include_reports) {
      json reports = json::array();
      for (const BoundReport& r : c.reports) {
        json jr = {{"tau", r.tau},
                   {"eta", r.eta},
                   {"e_above_ground", r.moments.e_above_ground},
                   {"delta_e", r.moments.delta_e},
                   {"mandelstam_tamm", bound_check_json(r.mandelstam_tamm)},
                   {"margolus_levitin", bound_check_json(r.margolus_levitin)},
                   {"modified_margolus_levitin", bound_check_json(r.modified_ml)}};
        if (r.strict) {
          jr["strict"] = {{"target_d", r.strict->target_d},
                          {"first_time", optional_number(r.strict->first_time)},
                          {"mandelstam_tamm", bound_check_json(r.strict->mandelstam_tamm)}};
        }
        reports.push_back(std::move(jr));
      }
      cell["reports"] = std::move(reports);
    }
    cells.push_back(std::move(cell));
  }
  json j = {{"tolerance", kBoundTimeTolerance},
            {"config", config_to_json(result.config)},
            {"cells", cells}};
  return j.dump(indent);
}

std::string cell_stem(int dim, SpectrumClass kind) {
  return fmt::format("{}_N{:02d}", to_string(kind), dim);
}

RunManifest write_run_outputs(const EnsembleResult& result,
                              const std::filesystem::path& dir,
                              Normalization normalization, int epsilon_points) {
  std::filesystem::create_directories(dir);
  RunManifest m;
  m.config = result.config;
  m.normalization = normalization;
  m.epsilon_points = epsilon_points;
  const std::vector<double> eps = uniform_epsilon_grid(epsilon_points);

  for (const CellResult& c : result.cells) {
    const std::string stem = cell_stem(c.dim, c.kind);
    ManifestCell mc;
    mc.dim = c.dim;
    mc.kind = c.kind;
    mc.window_hi = c.window.t_hi;
    mc.window_truncated = c.window.truncated;
    mc.truncated_fraction = c.aggregate.summary().truncated_fraction;
    mc.histogram_csv = "hist_" + stem + ".csv";
    mc.threshold_csv = "threshold_" + stem + ".csv";

    Histogram hist = c.aggregate.histogram;
    hist.set_normalization(normalization);
    auto hist_out = open_for_write(dir / mc.histogram_csv);
    write_histogram_csv(hist_out, hist);
    auto thr_out = open_for_write(dir / mc.threshold_csv);
    write_threshold_csv(thr_out, threshold_curve(c.d_values, eps));
    if (!hist_out || !thr_out) throw std::runtime_error("failed writing " + stem);

    m.files.push_back(mc.histogram_csv);
    m.files.push_back(mc.threshold_csv);
    m.cells.push_back(std::move(mc));
  }
  auto summary = open_for_write(dir / "summary.csv");
  write_summary_csv(summary, result);
  if (!summary) throw std::runtime_error("failed writing summary.csv");
  m.files.push_back("summary.csv");
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace qdist::io

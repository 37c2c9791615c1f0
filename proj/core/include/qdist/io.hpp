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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qdist/ensemble.hpp"

namespace qdist::io {

/// Shortest-roundtrip-safe decimal form: 17 significant digits.
std::string format_real(double value);

// CSV writers. Every table starts with a header row and keeps a fixed
// column order; big integers are written as decimal strings.

/// bin_lower,count,normalized
void write_histogram_csv(std::ostream& out, const Histogram& hist);
/// epsilon,probability,standard_error
void write_threshold_csv(std::ostream& out, const ThresholdCurve& curve);
/// One row per cell with summary statistics and bound violation counts.
void write_summary_csv(std::ostream& out, const EnsembleResult& result);
/// n,lcm,log10_lcm for n in [first, last].
void write_lcm_csv(std::ostream& out, int first, int last);

/// Decimal log10 of a positive big integer.
double log10_big(const BigInt& value);

std::string run_config_to_json(const RunConfig& cfg, int indent = 2);
/// Inverse of run_config_to_json. Missing keys keep their defaults.
RunConfig run_config_from_json(std::string_view text);

struct ManifestCell {
  int dim = 0;
  SpectrumClass kind = SpectrumClass::Harmonic;
  double window_hi = 0.0;
  bool window_truncated = false;
  double truncated_fraction = 0.0;
  std::string histogram_csv;
  std::string threshold_csv;
};

/// Everything needed to rerun and audit one invocation.
struct RunManifest {
  RunConfig config;
  std::string tool_version;
  std::string command;
  std::string started;
  std::string finished;
  double wall_seconds = 0.0;
  unsigned workers = 0;
  Normalization normalization = Normalization::TotalOne;
  int epsilon_points = 101;
  std::vector<ManifestCell> cells;
  std::vector<std::string> files;
  /// Named scalar results, e.g. the fig1 analytic-vs-empirical gap.
  std::map<std::string, double> metrics;
};

std::string manifest_to_json(const RunManifest& manifest, int indent = 2);
RunManifest manifest_from_json(std::string_view text);

/// Per-cell bound violation summary; with `include_reports`, also every
/// per-sample BoundReport kept in the result.
std::string bounds_summary_json(const EnsembleResult& result, bool include_reports,
                                int indent = 2);

/// File stem used for a cell, e.g. "harmonic_N05".
std::string cell_stem(int dim, SpectrumClass kind);

/// Writes hist_<stem>.csv and threshold_<stem>.csv for every cell plus
/// summary.csv into `dir`, and returns a manifest listing them (timestamps
/// left empty).
RunManifest write_run_outputs(const EnsembleResult& result,
                              const std::filesystem::path& dir,
                              Normalization normalization, int epsilon_points = 101);

/// ISO-8601 UTC timestamp of the current time.
std::string utc_timestamp();

}  // namespace qdist::io

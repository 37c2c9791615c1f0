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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdist/ensemble.hpp"
#include "qdist/io.hpp"
#include "qdist/svg.hpp"

namespace qdist::cli {

enum class FigureId { Fig1, Fig2, Fig3, Fig4, Fig5, Fig6, Fig7 };

std::string_view to_string(FigureId id);
/// Accepts "fig1" .. "fig7"; throws std::invalid_argument otherwise.
FigureId parse_figure_id(std::string_view name);

struct PlotSpec {
  FigureId id = FigureId::Fig1;
  std::vector<std::filesystem::path> inputs;
  svg::AxisScale x_scale = svg::AxisScale::Linear;
  svg::AxisScale y_scale = svg::AxisScale::Linear;
  std::filesystem::path output;
};

/// Layout of one figure with its files placed under `dir`: the data CSV is
/// the single input, the SVG the output.
PlotSpec plot_spec(FigureId id, const std::filesystem::path& dir);

struct ReproduceOptions {
  /// Unset fields fall back to the figure's defaults.
  std::optional<std::vector<int>> dims;
  std::optional<std::int64_t> samples;
  std::uint64_t seed = 1;
  double omega = 1.0;
  double cap = 10.0;
  int grid_density = 32;
  unsigned workers = 0;
  std::optional<Normalization> normalization;
  /// Empty histogram bins are drawn at this fraction of the panel maximum.
  double log_floor = 1e-6;
  std::string command;
};

struct ReproduceOutcome {
  PlotSpec spec;
  io::RunManifest manifest;
};

/// The ensemble configuration a figure needs before option overrides.
RunConfig figure_config(FigureId id, const ReproduceOptions& options);

/// Runs what the figure needs and writes <fig>.csv, <fig>.svg and
/// <fig>_manifest.json into `dir`.
ReproduceOutcome reproduce_figure(FigureId id, const ReproduceOptions& options,
                                  const std::filesystem::path& dir);

}  // namespace qdist::cli

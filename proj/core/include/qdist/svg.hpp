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

#include <optional>
#include <string>
#include <vector>

namespace qdist::svg {

enum class AxisScale { Linear, Log };

enum class SeriesStyle { Line, Markers, LineMarkers, ErrorBars };

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  /// Symmetric error bars, used by SeriesStyle::ErrorBars.
  std::vector<double> y_err;
  SeriesStyle style = SeriesStyle::Line;
};

struct Range {
  double lo;
  double hi;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  AxisScale x_scale = AxisScale::Linear;
  AxisScale y_scale = AxisScale::Linear;
  std::optional<Range> x_range;
  std::optional<Range> y_range;
  std::vector<Series> series;
  /// Dashed horizontal guide lines.
  std::vector<double> guides;
};

struct Figure {
  std::string title;
  std::vector<Panel> panels;
  int panel_width = 520;
  int panel_height = 380;
};

/// Renders panels side by side. Markers and polylines carry data-x/data-y or
/// data-points attributes with the untransformed values so tests can compare
/// plotted data structurally. Non-positive values are dropped on log axes.
std::string render(const Figure& figure);

}  // namespace qdist::svg

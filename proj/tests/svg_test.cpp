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


#include <algorithm>
#include <regex>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qdist/svg.hpp"

namespace qdist::svg {
namespace {

std::vector<std::string> captures(const std::string& text, const std::string& pattern) {
  std::vector<std::string> out;
  const std::regex re(pattern);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator();
       ++it) {
    out.push_back((*it)[1].str());
  }
  return out;
}

TEST(Svg, MarkersCarryData) {
  Figure f;
  f.title = "t";
  Panel p;
  p.series.push_back({"pts", {0.1, 0.2, 0.3}, {1.0, 2.0, 3.0}, {}, SeriesStyle::Markers});
  f.panels.push_back(p);
  const std::string out = render(f);
  EXPECT_EQ(out.rfind("<?xml", 0), 0u);
  EXPECT_NE(out.find("</svg>"), std::string::npos);
  const std::vector<std::string> ys = captures(out, "data-y=\"([^\"]+)\"");
  ASSERT_EQ(ys.size(), 3u);
  EXPECT_EQ(std::stod(ys[1]), 2.0);
  EXPECT_EQ(std::stod(captures(out, "data-x=\"([^\"]+)\"")[2]), 0.3);
}

TEST(Svg, LogAxisDropsNonPositive) {
  Figure f;
  Panel p;
  p.y_scale = AxisScale::Log;
  p.series.push_back({"h", {1, 2, 3, 4}, {1e-3, 0.0, -1.0, 10.0}, {}, SeriesStyle::Line});
  f.panels.push_back(p);
  const std::string out = render(f);
  EXPECT_EQ(captures(out, "data-y-scale=\"([a-z]+)\"").front(), "log");
  const std::string pts = captures(out, "data-points=\"([^\"]*)\"").front();
  EXPECT_EQ(std::count(pts.begin(), pts.end(), ','), 2);
}

TEST(Svg, PanelsSideBySideWithGuides) {
  Figure f;
  f.panel_width = 300;
  for (int i = 0; i < 2; ++i) {
    Panel p;
    p.title = i == 0 ? "harmonic" : "atomic";
    p.guides = {1.0};
    p.series.push_back({"m", {2, 3}, {0.5, 0.9}, {0.1, 0.05}, SeriesStyle::ErrorBars});
    f.panels.push_back(p);
  }
  const std::string out = render(f);
  EXPECT_EQ(captures(out, "class=\"panel\" data-title=\"([a-z]+)\"").size(), 2u);
  EXPECT_EQ(captures(out, "class=\"guide\"[^>]*data-y=\"([^\"]+)\"").size(), 2u);
  EXPECT_NE(out.find("width=\"600"), std::string::npos);
}

TEST(Svg, EscapesText) {
  Figure f;
  f.title = "a < b & c";
  const std::string out = render(f);
  EXPECT_NE(out.find("a &lt; b &amp; c"), std::string::npos);
}

}  // namespace
}  // namespace qdist::svg

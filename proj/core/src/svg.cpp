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

#include "qdist/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>

#include <fmt/format.h>

namespace qdist::svg {
namespace {

constexpr std::string_view kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                         "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 18.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string px(double v) { return fmt::format("{:.2f}", v); }

bool usable(double v, AxisScale scale) {
  return std::isfinite(v) && (scale == AxisScale::Linear || v > 0.0);
}

// Maps data coordinates onto one axis of the panel.
struct Axis {
  AxisScale scale;
  double lo;
  double hi;
  double pix_lo;
  double pix_hi;

  double transform(double v) const { return scale == AxisScale::Log ? std::log10(v) : v; }

  double operator()(double v) const {
    const double a = transform(lo);
    const double b = transform(hi);
    return pix_lo + (transform(v) - a) / (b - a) * (pix_hi - pix_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (scale == AxisScale::Log) {
      const int first = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
      const int last = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
      const int stride = std::max(1, (last - first) / 8 + 1);
      for (int e = first; e <= last; e += stride) out.push_back(std::pow(10.0, e));
      return out;
    }
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
      step = m * mag;
      if (span / step <= 6.0) break;
    }
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * span; t += step) {
      out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    }
    return out;
  }
};

Range data_range(const Panel& panel, bool x_axis) {
  const AxisScale scale = x_axis ? panel.x_scale : panel.y_scale;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Series& s : panel.series) {
    const auto& values = x_axis ? s.x : s.y;
    for (std::size_t i = 0; i < values.size(); ++i) {
      double v = values[i];
      if (!usable(v, scale)) continue;
      double vlo = v;
      double vhi = v;
      if (!x_axis && s.style == SeriesStyle::ErrorBars && i < s.y_err.size()) {
        vlo = v - s.y_err[i];
        vhi = v + s.y_err[i];
        if (!usable(vlo, scale)) vlo = v;
      }
      lo = std::min(lo, vlo);
      hi = std::max(hi, vhi);
    }
  }
  if (!x_axis) {
    for (double g : panel.guides) {
      if (usable(g, scale)) {
        lo = std::min(lo, g);
        hi = std::max(hi, g);
      }
    }
  }
  if (!std::isfinite(lo)) return scale == AxisScale::Log ? Range{1.0, 10.0} : Range{0.0, 1.0};
  if (lo == hi) {
    if (scale == AxisScale::Log) return {lo / 10.0, hi * 10.0};
    const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

std::string tick_label(double v, AxisScale scale) {
  if (scale == AxisScale::Log) return fmt::format("1e{}", static_cast<int>(std::lround(std::log10(v))));
  return fmt::format("{:g}", v);
}

void render_panel(std::string& out, const Panel& panel, double x0, double width,
                  double height) {
  const Range xr = panel.x_range.value_or(data_range(panel, true));
  const Range yr = panel.y_range.value_or(data_range(panel, false));
  const Axis ax{panel.x_scale, xr.lo, xr.hi, x0 + kMarginLeft, x0 + width - kMarginRight};
  const Axis ay{panel.y_scale, yr.lo, yr.hi, height - kMarginBottom, kMarginTop};

  out += fmt::format("<g class=\"panel\" data-title=\"{}\" data-x-scale=\"{}\" data-y-scale=\"{}\">\n",
                     escape(panel.title), panel.x_scale == AxisScale::Log ? "log" : "linear",
                     panel.y_scale == AxisScale::Log ? "log" : "linear");
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
      px(ax.pix_lo), px(ay.pix_hi), px(ax.pix_hi - ax.pix_lo), px(ay.pix_lo - ay.pix_hi));
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     px(0.5 * (ax.pix_lo + ax.pix_hi)), px(kMarginTop - 14), escape(panel.title));

  for (double t : ax.ticks()) {
    const double x = ax(t);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#333\"/>\n",
                       px(x), px(ay.pix_lo), px(ay.pix_lo + 5));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n",
                       px(x), px(ay.pix_lo + 18), tick_label(t, panel.x_scale));
  }
  for (double t : ay.ticks()) {
    const double y = ay(t);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#333\"/>\n",
                       px(ax.pix_lo - 5), px(y), px(ax.pix_lo));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"11\">{}</text>\n",
                       px(ax.pix_lo - 8), px(y + 4), tick_label(t, panel.y_scale));
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
                     px(0.5 * (ax.pix_lo + ax.pix_hi)), px(height - 14), escape(panel.x_label));
  out += fmt::format(
      "<text x=\"{0}\" y=\"{1}\" text-anchor=\"middle\" font-size=\"13\" "
      "transform=\"rotate(-90 {0} {1})\">{2}</text>\n",
      px(x0 + 18), px(0.5 * (ay.pix_lo + ay.pix_hi)), escape(panel.y_label));

  for (double g : panel.guides) {
    if (!usable(g, panel.y_scale)) continue;
    out += fmt::format(
        "<line class=\"guide\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#777\" "
        "stroke-dasharray=\"6,4\" data-y=\"{3}\"/>\n",
        px(ax.pix_lo), px(ay(g)), px(ax.pix_hi), num(g));
  }

  const auto inside = [&](double x, double y) {
    return usable(x, panel.x_scale) && usable(y, panel.y_scale);
  };
  std::size_t color = 0;
  for (const Series& s : panel.series) {
    const std::string_view stroke = kPalette[color++ % std::size(kPalette)];
    out += fmt::format("<g class=\"series\" data-label=\"{}\">\n", escape(s.label));
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.style == SeriesStyle::Line || s.style == SeriesStyle::LineMarkers) {
      std::string pts;
      std::string data;
      for (std::size_t i = 0; i < n; ++i) {
        if (!inside(s.x[i], s.y[i])) continue;
        pts += fmt::format("{},{} ", px(ax(s.x[i])), px(ay(s.y[i])));
        data += fmt::format("{},{} ", num(s.x[i]), num(s.y[i]));
      }
      out += fmt::format(
          "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\" points=\"{}\" "
          "data-points=\"{}\"/>\n",
          stroke, pts, data);
    }
    if (s.style != SeriesStyle::Line) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!inside(s.x[i], s.y[i])) continue;
        const double cx = ax(s.x[i]);
        const double cy = ay(s.y[i]);
        if (s.style == SeriesStyle::ErrorBars && i < s.y_err.size()) {
          const double lo = s.y[i] - s.y_err[i];
          const double hi = s.y[i] + s.y_err[i];
          const double py_lo = usable(lo, panel.y_scale) ? ay(lo) : ay.pix_lo;
          out += fmt::format(
              "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"{3}\"/>\n", px(cx),
              px(py_lo), px(ay(hi)), stroke);
        }
        out += fmt::format(
            "<path class=\"marker\" d=\"M{} {} l4 7 h-8 z\" fill=\"{}\" data-x=\"{}\" "
            "data-y=\"{}\"/>\n",
            px(cx), px(cy - 4), stroke, num(s.x[i]), num(s.y[i]));
      }
    }
    out += "</g>\n";
  }

  double ly = kMarginTop + 14;
  color = 0;
  for (const Series& s : panel.series) {
    const std::string_view stroke = kPalette[color++ % std::size(kPalette)];
    if (s.label.empty()) continue;
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"4\" fill=\"{}\"/>"
        "<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n",
        px(ax.pix_hi - 110), px(ly - 4), stroke, px(ax.pix_hi - 94), px(ly), escape(s.label));
    ly += 15;
  }
  out += "</g>\n";
}

}  // namespace

std::string render(const Figure& figure) {
  const double width = static_cast<double>(figure.panel_width);
  const double height = static_cast<double>(figure.panel_height);
  const double total_width = width * static_cast<double>(std::max<std::size_t>(1, figure.panels.size()));
  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">\n"
      "<title>{2}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      px(total_width), px(height), escape(figure.title));
  for (std::size_t i = 0; i < figure.panels.size(); ++i) {
    render_panel(out, figure.panels[i], width * static_cast<double>(i), width, height);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace qdist::svg

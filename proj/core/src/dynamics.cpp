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

#include "qdist/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace qdist {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieTolerance = 1e-12;
// Steps between exact re-evaluations of the rotating phasors.
constexpr std::int64_t kAnchorStride = 512;

void check_dimensions(const ProbabilityVector& p, const Spectrum& spectrum) {
  if (p.size() != spectrum.dimension()) {
    throw std::invalid_argument("probability vector and spectrum differ in dimension");
  }
}

// Populated levels only; empty levels contribute nothing to S(t).
struct ActiveTerms {
  std::vector<double> weight;
  std::vector<double> freq;

  ActiveTerms(const ProbabilityVector& p, const Spectrum& spectrum) {
    for (std::size_t n = 0; n < p.size(); ++n) {
      if (p[n] > 0.0) {
        weight.push_back(p[n]);
        freq.push_back(spectrum[n]);
      }
    }
  }

  std::size_t size() const { return weight.size(); }

  double widest_gap() const {
    const auto [lo, hi] = std::minmax_element(freq.begin(), freq.end());
    return *hi - *lo;
  }

  double variance() const {
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t n = 0; n < size(); ++n) {
      m1 += weight[n] * freq[n];
      m2 += weight[n] * freq[n] * freq[n];
    }
    return std::max(0.0, m2 - m1 * m1);
  }

  // Bound on |D'''(t)| = |sum_{n != m} p_n p_m (w_n - w_m)^3 sin((w_n - w_m) t)|.
  double third_derivative_bound() const {
    double acc = 0.0;
    for (std::size_t n = 0; n < size(); ++n) {
      for (std::size_t m = n + 1; m < size(); ++m) {
        const double gap = std::abs(freq[n] - freq[m]);
        acc += weight[n] * weight[m] * gap * gap * gap;
      }
    }
    return 2.0 * acc;
  }

  // |S(t)|^2 and its time derivative.
  double survival(double t) const {
    double c = 0.0;
    double s = 0.0;
    for (std::size_t n = 0; n < size(); ++n) {
      const double phase = freq[n] * t;
      c += weight[n] * std::cos(phase);
      s += weight[n] * std::sin(phase);
    }
    return std::clamp(c * c + s * s, 0.0, 1.0);
  }

  // d|S|^2/dt = -sum_{n<m} 2 p_n p_m g sin(g t), g = w_n - w_m. Summed pair
  // by pair so the sign stays reliable where |S|^2 is flat.
  struct PairSlope {
    std::vector<double> weight;
    std::vector<double> gap;

    explicit PairSlope(const ActiveTerms& terms) {
      for (std::size_t n = 0; n < terms.size(); ++n) {
        for (std::size_t m = n + 1; m < terms.size(); ++m) {
          const double g = terms.freq[n] - terms.freq[m];
          weight.push_back(2.0 * terms.weight[n] * terms.weight[m] * g);
          gap.push_back(g);
        }
      }
    }

    double operator()(double t) const {
      double acc = 0.0;
      for (std::size_t k = 0; k < gap.size(); ++k) acc -= weight[k] * std::sin(gap[k] * t);
      return acc;
    }
  };
};

struct Candidate {
  std::int64_t index;
  double value;
};

// Uniform grid t_k = t_lo + k*step, k = 0..intervals.
struct Grid {
  double t_lo;
  double step;
  std::int64_t intervals;

  double at(std::int64_t k) const {
    return k == intervals ? t_hi_ : t_lo + static_cast<double>(k) * step;
  }
  double t_hi_;
};

Grid make_grid(const TimeWindow& window, double period, int points_per_period) {
  const double target_step = period / points_per_period;
  const double intervals_real = std::ceil(window.length() / target_step);
  if (!(intervals_real < 4e12)) {
    throw std::invalid_argument("search window too long for the requested grid density");
  }
  const auto intervals = std::max<std::int64_t>(2, static_cast<std::int64_t>(intervals_real));
  return Grid{window.t_lo, window.length() / static_cast<double>(intervals), intervals,
              window.t_hi};
}

// Four doubles; maps onto one AVX register or two SSE registers. Only
// 8-byte alignment is assumed, so plain double buffers can be viewed as Lanes.
using Lanes = double __attribute__((vector_size(32), aligned(8), may_alias));
constexpr std::size_t kLaneWidth = 4;

// Writes D at `count` consecutive grid points into `out`, advancing the
// phasors z_j = p_j exp(-i w_j t) by one grid step after each point. Terms
// are packed four per Lanes value; padding terms are zero.
#define QDIST_ADVANCE_PHASORS_BODY                                   \
  for (std::size_t k = 0; k < count; ++k) {                          \
    Lanes acc_r = {0.0, 0.0, 0.0, 0.0};                              \
    Lanes acc_i = {0.0, 0.0, 0.0, 0.0};                              \
    for (std::size_t j = 0; j < packs; ++j) {                        \
      const Lanes a = zr[j];                                         \
      const Lanes b = zi[j];                                         \
      acc_r += a;                                                    \
      acc_i += b;                                                    \
      zr[j] = a * rr[j] - b * ri[j];                                 \
      zi[j] = a * ri[j] + b * rr[j];                                 \
    }                                                                \
    const double sr = (acc_r[0] + acc_r[1]) + (acc_r[2] + acc_r[3]); \
    const double si = (acc_i[0] + acc_i[1]) + (acc_i[2] + acc_i[3]); \
    out[k] = 1.0 - (sr * sr + si * si);                              \
  }

void advance_phasors_generic(Lanes* __restrict zr, Lanes* __restrict zi,
                             const Lanes* __restrict rr, const Lanes* __restrict ri,
                             std::size_t packs, double* __restrict out, std::size_t count) {
  QDIST_ADVANCE_PHASORS_BODY
}

#if defined(__GNUC__) && defined(__x86_64__)
#define QDIST_HAVE_AVX2_PATH 1
__attribute__((target("avx2,fma"))) void advance_phasors_avx2(
    Lanes* __restrict zr, Lanes* __restrict zi, const Lanes* __restrict rr,
    const Lanes* __restrict ri, std::size_t packs, double* __restrict out,
    std::size_t count) {
  QDIST_ADVANCE_PHASORS_BODY
}
#endif

#undef QDIST_ADVANCE_PHASORS_BODY

using AdvanceFn = void (*)(Lanes*, Lanes*, const Lanes*, const Lanes*, std::size_t, double*,
                           std::size_t);

// Chosen once per process, so every evaluation in a run uses the same code
// path.
AdvanceFn select_advance_phasors() {
#ifdef QDIST_HAVE_AVX2_PATH
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return advance_phasors_avx2;
  }
#endif
  return advance_phasors_generic;
}

const AdvanceFn advance_phasors = select_advance_phasors();

// Evaluates D on the whole grid in blocks of kAnchorStride points. Each block
// starts from exactly evaluated phasors, so rounding drift stays bounded.
// Calls visit(first_index, values) once per block, in order.
template <typename Visit>
void scan_grid(const ActiveTerms& terms, const Grid& grid, Visit&& visit) {
  const std::size_t n = terms.size();
  const std::size_t packs = (n + kLaneWidth - 1) / kLaneWidth;
  std::vector<double> re(packs * kLaneWidth, 0.0);
  std::vector<double> im(packs * kLaneWidth, 0.0);
  std::vector<double> rot_re(packs * kLaneWidth, 0.0);
  std::vector<double> rot_im(packs * kLaneWidth, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    rot_re[j] = std::cos(terms.freq[j] * grid.step);
    rot_im[j] = -std::sin(terms.freq[j] * grid.step);
  }
  std::vector<double> values(static_cast<std::size_t>(kAnchorStride));
  const std::int64_t points = grid.intervals + 1;
  for (std::int64_t first = 0; first < points; first += kAnchorStride) {
    const double t = grid.at(first);
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = terms.freq[j] * t;
      re[j] = terms.weight[j] * std::cos(phase);
      im[j] = -terms.weight[j] * std::sin(phase);
    }
    const auto count = static_cast<std::size_t>(std::min(kAnchorStride, points - first));
    advance_phasors(reinterpret_cast<Lanes*>(re.data()), reinterpret_cast<Lanes*>(im.data()),
                    reinterpret_cast<const Lanes*>(rot_re.data()),
                    reinterpret_cast<const Lanes*>(rot_im.data()), packs, values.data(), count);
    for (std::size_t k = 0; k < count; ++k) values[k] = std::clamp(values[k], 0.0, 1.0);
    visit(first, std::span<const double>(values.data(), count));
  }
}

struct LocalOptimum {
  double t;
  double d;
  // Grid bracket the optimum was refined in.
  double a;
  double b;
};

// Golden-section minimisation of the survival probability on [a, b], an
// interval around a grid maximum. Below roughly sqrt(eps) in relative time
// |S|^2 is too flat to compare, so it stops at coarse_width.
LocalOptimum golden_section(const ActiveTerms& terms, double a, double b,
                            double coarse_width) {
  constexpr double inv_phi = 0.6180339887498949;
  const double a0 = a;
  const double b0 = b;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = terms.survival(x1);
  double f2 = terms.survival(x2);
  while (b - a > coarse_width) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = terms.survival(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = terms.survival(x2);
    }
  }
  const double t = f1 <= f2 ? x1 : x2;
  return {t, 1.0 - std::min(f1, f2), a0, b0};
}

// Bisection on the sign of the slope over the whole grid bracket. The slope
// is linear in t - tau near the minimum, so this reaches time_tolerance even
// where the value itself no longer resolves.
LocalOptimum polish(const ActiveTerms& terms, const ActiveTerms::PairSlope& slope,
                    const LocalOptimum& opt, double time_tolerance) {
  double lo = opt.a;
  double hi = opt.b;
  if (!(slope(lo) < 0.0 && slope(hi) > 0.0)) return opt;
  for (int iter = 0; iter < 200 && hi - lo > time_tolerance; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (slope(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  return {t, 1.0 - terms.survival(t), opt.a, opt.b};
}

}  // namespace

void GridConfig::validate() const {
  if (points_per_fastest_period < 8) {
    throw std::invalid_argument("points_per_fastest_period must be >= 8");
  }
  if (!(refine_tolerance > 0.0)) {
    throw std::invalid_argument("refine_tolerance must be positive");
  }
}

double survival_probability(const ProbabilityVector& p, const Spectrum& spectrum,
                            double t) {
  check_dimensions(p, spectrum);
  double c = 0.0;
  double s = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double phase = spectrum[n] * t;
    c += p[n] * std::cos(phase);
    s += p[n] * std::sin(phase);
  }
  return std::clamp(c * c + s * s, 0.0, 1.0);
}

double distinguishability_at(const ProbabilityVector& p, const Spectrum& spectrum,
                             double t) {
  return 1.0 - survival_probability(p, spectrum, t);
}

double fastest_period(const ProbabilityVector& p, const Spectrum& spectrum) {
  check_dimensions(p, spectrum);
  const ActiveTerms terms(p, spectrum);
  if (terms.size() < 2) return std::numeric_limits<double>::infinity();
  return 2.0 * kPi / terms.widest_gap();
}

OptimizationResult maximize_distinguishability(const ProbabilityVector& p,
                                               const Spectrum& spectrum,
                                               const TimeWindow& window,
                                               const GridConfig& cfg) {
  check_dimensions(p, spectrum);
  cfg.validate();
  if (!window.valid()) {
    throw std::invalid_argument("degenerate search window");
  }

  OptimizationResult result;
  result.window = window;
  result.truncated = window.truncated;
  result.tau = window.t_lo;

  const ActiveTerms terms(p, spectrum);
  if (terms.size() < 2) {
    return result;
  }

  const Grid grid = make_grid(window, 2.0 * kPi / terms.widest_gap(),
                              cfg.points_per_fastest_period);
  result.grid_points = grid.intervals + 1;

  // Any maximum inside a grid cell exceeds the nearer grid value by at most
  // max|D''| (h/2)^2 / 2, and |D''| <= 2 Var(w).
  const double margin =
      terms.variance() * grid.step * grid.step / 4.0 + 1e-12;

  std::vector<Candidate> candidates;
  double best = -1.0;
  double prev2 = -1.0;  // D at k-2
  double prev1 = -1.0;  // D at k-1
  auto consider = [&](std::int64_t index, double value, double left, double right) {
    if (value >= left && value >= right && value >= best - margin) {
      candidates.push_back({index, value});
      best = std::max(best, value);
    }
  };
  scan_grid(terms, grid, [&](std::int64_t first, std::span<const double> values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double d = values[k];
      // Cheap reject before the full local-maximum test.
      if (prev1 >= best - margin && first + static_cast<std::int64_t>(k) >= 1) {
        consider(first + static_cast<std::int64_t>(k) - 1, prev1, prev2, d);
      }
      prev2 = prev1;
      prev1 = d;
    }
  });
  consider(grid.intervals, prev1, prev2, -1.0);

  std::erase_if(candidates, [&](const Candidate& c) { return c.value < best - margin; });

  // Ceiling on D inside each candidate's bracket [t_{i-1}, t_{i+1}]: peak of
  // the interpolating parabola plus its remainder bound M3 h^3 / (9 sqrt 3),
  // M3 = max |D'''|. Boundary points fall back to the curvature margin.
  const double parabola_slack = terms.third_derivative_bound() * grid.step * grid.step *
                                    grid.step / (9.0 * std::sqrt(3.0)) +
                                1e-12;
  std::vector<double> ceiling(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::int64_t i = candidates[c].index;
    if (i == 0 || i == grid.intervals) {
      ceiling[c] = candidates[c].value + margin;
      continue;
    }
    const double left = 1.0 - terms.survival(grid.at(i - 1));
    const double mid = candidates[c].value;
    const double right = 1.0 - terms.survival(grid.at(i + 1));
    const double curvature = left - 2.0 * mid + right;
    double peak = std::max({left, mid, right});
    if (curvature < 0.0) {
      const double s = std::clamp(0.5 * (left - right) / curvature, -1.0, 1.0);
      peak = std::max(peak, mid + 0.5 * s * (right - left) + 0.5 * s * s * curvature);
    }
    ceiling[c] = peak + parabola_slack;
  }
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ceiling[a] != ceiling[b] ? ceiling[a] > ceiling[b] : a < b;
  });

  std::vector<LocalOptimum> optima;
  double best_found = -1.0;
  for (std::size_t c : order) {
    if (ceiling[c] < best_found - kTieTolerance) break;
    const Candidate& cand = candidates[c];
    const double t_grid = grid.at(cand.index);
    if (!cfg.refine) {
      optima.push_back({t_grid, cand.value, t_grid, t_grid});
      best_found = std::max(best_found, cand.value);
      continue;
    }
    const double a = grid.at(std::max<std::int64_t>(0, cand.index - 1));
    const double b = grid.at(std::min(grid.intervals, cand.index + 1));
    LocalOptimum opt = golden_section(terms, a, b, 1e-5 * grid.step);
    const double d_grid = 1.0 - terms.survival(t_grid);
    if (d_grid > opt.d) opt = {t_grid, d_grid, a, b};
    optima.push_back(opt);
    best_found = std::max(best_found, opt.d);
  }
  result.candidates = static_cast<std::int64_t>(optima.size());
  result.refined = cfg.refine;

  double top = -1.0;
  for (const LocalOptimum& o : optima) top = std::max(top, o.d);
  if (cfg.refine) {
    const ActiveTerms::PairSlope slope(terms);
    for (LocalOptimum& o : optima) {
      if (o.d < top - 2.0 * kTieTolerance) continue;
      const double scale = std::max(1.0, std::abs(o.t));
      o = polish(terms, slope, o, 0.01 * cfg.refine_tolerance * scale);
    }
    top = -1.0;
    for (const LocalOptimum& o : optima) top = std::max(top, o.d);
  }
  const LocalOptimum* chosen = nullptr;
  for (const LocalOptimum& o : optima) {
    if (o.d >= top - kTieTolerance && (chosen == nullptr || o.t < chosen->t)) {
      chosen = &o;
    }
  }
  result.tau = std::clamp(chosen->t, window.t_lo, window.t_hi);
  result.d_max = std::clamp(chosen->d, 0.0, 1.0);
  return result;
}

std::optional<double> first_time_reaching(const ProbabilityVector& p,
                                          const Spectrum& spectrum,
                                          const TimeWindow& window,
                                          double target_d, const GridConfig& cfg) {
  check_dimensions(p, spectrum);
  cfg.validate();
  if (!window.valid()) {
    throw std::invalid_argument("degenerate search window");
  }
  const ActiveTerms terms(p, spectrum);
  if (target_d <= 0.0) return window.t_lo;
  if (terms.size() < 2) return std::nullopt;

  const Grid grid = make_grid(window, 2.0 * kPi / terms.widest_gap(),
                              cfg.points_per_fastest_period);
  const double margin = terms.variance() * grid.step * grid.step / 4.0 + 1e-12;
  auto d_at = [&](double t) { return 1.0 - terms.survival(t); };

  // Walk cells in time order; a cell can reach the target only if one of its
  // end values is within `margin` of it.
  double db = d_at(grid.at(0));
  for (std::int64_t k = 0; k < grid.intervals; ++k) {
    const double a = grid.at(k);
    const double b = grid.at(k + 1);
    const double da = db;
    if (da >= target_d) return a;
    db = d_at(b);
    if (std::max(da, db) + margin < target_d) continue;

    // Locate the cell maximum, then bisect for the crossing before it.
    double peak_t = b;
    double peak_d = db;
    if (db < target_d) {
      const double lo = grid.at(std::max<std::int64_t>(0, k - 1));
      const double hi = grid.at(std::min(grid.intervals, k + 2));
      const LocalOptimum opt = golden_section(terms, lo, hi, 1e-5 * grid.step);
      if (opt.d < target_d - kTieTolerance || opt.t < a) continue;
      peak_t = opt.t;
      peak_d = opt.d;
    }
    double lo = a;
    double hi = peak_t;
    if (peak_d < target_d) return peak_t;
    for (int iter = 0; iter < 200 && hi - lo > cfg.refine_tolerance * std::max(1.0, hi);
         ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (d_at(mid) >= target_d) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }
  return std::nullopt;
}

TwoLevelOptimum two_level_closed_form(const ProbabilityVector& p, double gap) {
  if (p.size() != 2) {
    throw std::invalid_argument("two_level_closed_form needs a two-level state");
  }
  if (!(gap > 0.0)) {
    throw std::invalid_argument("level gap must be positive");
  }
  return {kPi / gap, 4.0 * p[0] * p[1]};
}

double n2_threshold_probability(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (epsilon == 0.0) return 0.0;
  const double root = std::sqrt(epsilon);
  const double alpha_plus = std::sqrt(2.0 / (1.0 + root) - 1.0);
  // At epsilon = 1, alpha_minus diverges and its arctangent tends to pi/2.
  const double atan_minus =
      epsilon == 1.0 ? kPi / 2.0 : std::atan(std::sqrt(2.0 / (1.0 - root) - 1.0));
  return std::min(1.0, (2.0 / kPi) * std::abs(std::atan(alpha_plus) - atan_minus));
}

}  // namespace qdist

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
#include <optional>

#include "qdist/sampling.hpp"
#include "qdist/spectra.hpp"

namespace qdist {

struct GridConfig {
  /// Grid density relative to the fastest beat period of the state.
  int points_per_fastest_period = 32;
  /// Relative time tolerance of the local refinement.
  double refine_tolerance = 1e-10;
  bool refine = true;

  /// Throws std::invalid_argument unless points_per_fastest_period >= 8 and
  /// refine_tolerance > 0.
  void validate() const;
};

/// Time and value of the largest distinguishability found in a window.
struct OptimizationResult {
  double tau = 0.0;
  double d_max = 0.0;
  TimeWindow window;
  std::int64_t grid_points = 0;
  /// Number of grid maxima that were refined.
  std::int64_t candidates = 0;
  bool refined = false;
  bool truncated = false;
};

/// |sum_n p_n exp(-i w_n t)|^2, the fidelity between the state and its
/// evolved self. Throws std::invalid_argument on a dimension mismatch.
double survival_probability(const ProbabilityVector& p, const Spectrum& spectrum,
                            double t);

/// 1 - survival_probability.
double distinguishability_at(const ProbabilityVector& p, const Spectrum& spectrum,
                             double t);

/// 2*pi over the widest frequency gap between populated levels; +inf when
/// fewer than two levels are populated.
double fastest_period(const ProbabilityVector& p, const Spectrum& spectrum);

/// Global maximum of D(t) over `window`.
///
/// Scans a uniform grid with at least `points_per_fastest_period` points per
/// fastest beat period, then refines every grid maximum that could still hold
/// the global maximum: golden-section search on the survival probability
/// followed by bisection on its derivative. Among maxima equal to within
/// 1e-12 the earliest is reported.
///
/// A state populating a single level never evolves; it yields tau = t_lo,
/// d_max = 0 and no grid.
OptimizationResult maximize_distinguishability(const ProbabilityVector& p,
                                               const Spectrum& spectrum,
                                               const TimeWindow& window,
                                               const GridConfig& cfg = {});

/// Earliest t in `window` with D(t) >= target_d, if any.
std::optional<double> first_time_reaching(const ProbabilityVector& p,
                                          const Spectrum& spectrum,
                                          const TimeWindow& window,
                                          double target_d,
                                          const GridConfig& cfg = {});

struct TwoLevelOptimum {
  double tau = 0.0;
  double d_max = 0.0;
};

/// Exact optimum for two levels separated by `gap`: tau = pi/gap,
/// d_max = 4 p1 p2.
TwoLevelOptimum two_level_closed_form(const ProbabilityVector& p, double gap);

/// Probability that a random two-level state reaches D >= 1 - epsilon,
/// (2/pi) |atan(a+) - atan(a-)| with a(+/-) = sqrt(2/(1 +/- sqrt(eps)) - 1).
double n2_threshold_probability(double epsilon);

}  // namespace qdist

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

#include "qdist/dynamics.hpp"
#include "qdist/sampling.hpp"
#include "qdist/spectra.hpp"

namespace qdist {

/// Energy statistics of a state in units with hbar = 1.
struct EnergyMoments {
  /// Mean energy above the lowest level of the truncated spectrum.
  double e_above_ground = 0.0;
  /// Energy standard deviation.
  double delta_e = 0.0;
};

EnergyMoments energy_moments(const ProbabilityVector& p, const Spectrum& spectrum);

// Each bound returns std::nullopt when it does not apply (zero energy spread
// or zero mean energy above ground). Out-of-range eta throws.

/// arccos(sqrt(eta)) / delta_e
std::optional<double> mandelstam_tamm_bound(double delta_e, double eta);
/// pi / (2 e)
std::optional<double> margolus_levitin_bound(double e_above_ground);
/// pi / (2 e) * (1 - sqrt(eta))
std::optional<double> modified_ml_bound(double e_above_ground, double eta);

/// Outcome of one bound for one state.
struct BoundCheck {
  std::optional<double> bound;
  bool satisfied = true;

  bool applicable() const noexcept { return bound.has_value(); }
  bool violated() const noexcept { return applicable() && !satisfied; }
};

/// Optional first-passage comparison: the earliest time D(t) reaches
/// (1 - eta) * d_max, checked against the Mandelstam-Tamm bound at that level.
struct StrictCheck {
  double target_d = 0.0;
  std::optional<double> first_time;
  BoundCheck mandelstam_tamm;
};

struct BoundReport {
  double tau = 0.0;
  /// 1 - d_max, the deviation from orthogonality.
  double eta = 1.0;
  EnergyMoments moments;
  BoundCheck mandelstam_tamm;
  BoundCheck margolus_levitin;
  BoundCheck modified_ml;
  std::optional<StrictCheck> strict;
};

/// Absolute slack when comparing tau against a bound.
inline constexpr double kBoundTimeTolerance = 1e-9;

BoundReport check_bounds(const OptimizationResult& result, const ProbabilityVector& p,
                         const Spectrum& spectrum);

/// check_bounds plus the StrictCheck, scanned with `grid`.
BoundReport check_bounds_strict(const OptimizationResult& result,
                                const ProbabilityVector& p, const Spectrum& spectrum,
                                const GridConfig& grid);

/// Applicable/violated counts for one bound.
struct BoundCounter {
  std::int64_t applicable = 0;
  std::int64_t violated = 0;

  double violation_rate() const noexcept {
    return applicable == 0 ? 0.0 : static_cast<double>(violated) / applicable;
  }
};

/// Violation statistics over a set of reports; merges by addition.
struct BoundTally {
  std::int64_t samples = 0;
  BoundCounter mandelstam_tamm;
  BoundCounter margolus_levitin;
  BoundCounter modified_ml;
  BoundCounter strict_mandelstam_tamm;

  void add(const BoundReport& report);
  void merge(const BoundTally& other);
};

}  // namespace qdist

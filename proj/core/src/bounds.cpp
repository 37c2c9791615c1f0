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

#include "qdist/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdist {
namespace {

constexpr double kPi = std::numbers::pi;

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in [0, 1]");
  }
}

BoundCheck compare(double t, std::optional<double> bound) {
  BoundCheck check{bound, true};
  if (bound) check.satisfied = t + kBoundTimeTolerance >= *bound;
  return check;
}

void count(BoundCounter& counter, const BoundCheck& check) {
  if (!check.applicable()) return;
  ++counter.applicable;
  if (!check.satisfied) ++counter.violated;
}

void add_counter(BoundCounter& into, const BoundCounter& from) {
  into.applicable += from.applicable;
  into.violated += from.violated;
}

}  // namespace

EnergyMoments energy_moments(const ProbabilityVector& p, const Spectrum& spectrum) {
  if (p.size() != spectrum.dimension()) {
    throw std::invalid_argument("probability vector and spectrum differ in dimension");
  }
  // Moments of the energy measured from the ground level; the shift leaves
  // the variance unchanged and keeps it well conditioned.
  const double ground = spectrum.ground();
  double mean_above = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    mean_above += p[n] * (spectrum[n] - ground);
  }
  double var = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double dev = spectrum[n] - ground - mean_above;
    var += p[n] * dev * dev;
  }
  return {std::max(0.0, mean_above), std::sqrt(std::max(0.0, var))};
}

std::optional<double> mandelstam_tamm_bound(double delta_e, double eta) {
  check_eta(eta);
  if (!(delta_e > 0.0)) return std::nullopt;
  return std::acos(std::sqrt(eta)) / delta_e;
}

std::optional<double> margolus_levitin_bound(double e_above_ground) {
  if (!(e_above_ground > 0.0)) return std::nullopt;
  return kPi / (2.0 * e_above_ground);
}

std::optional<double> modified_ml_bound(double e_above_ground, double eta) {
  check_eta(eta);
  if (!(e_above_ground > 0.0)) return std::nullopt;
  return kPi / (2.0 * e_above_ground) * (1.0 - std::sqrt(eta));
}

BoundReport check_bounds(const OptimizationResult& result, const ProbabilityVector& p,
                         const Spectrum& spectrum) {
  BoundReport report;
  report.tau = result.tau;
  report.eta = std::clamp(1.0 - result.d_max, 0.0, 1.0);
  report.moments = energy_moments(p, spectrum);
  const auto& m = report.moments;
  report.mandelstam_tamm =
      compare(report.tau, mandelstam_tamm_bound(m.delta_e, report.eta));
  report.margolus_levitin = compare(report.tau, margolus_levitin_bound(m.e_above_ground));
  report.modified_ml =
      compare(report.tau, modified_ml_bound(m.e_above_ground, report.eta));
  return report;
}

BoundReport check_bounds_strict(const OptimizationResult& result,
                                const ProbabilityVector& p, const Spectrum& spectrum,
                                const GridConfig& grid) {
  BoundReport report = check_bounds(result, p, spectrum);
  StrictCheck strict;
  strict.target_d = (1.0 - report.eta) * result.d_max;
  if (result.window.valid()) {
    strict.first_time = first_time_reaching(p, spectrum, result.window, strict.target_d, grid);
  }
  if (strict.first_time) {
    strict.mandelstam_tamm = compare(
        *strict.first_time,
        mandelstam_tamm_bound(report.moments.delta_e, std::clamp(1.0 - strict.target_d, 0.0, 1.0)));
  } else {
    strict.mandelstam_tamm = BoundCheck{std::nullopt, true};
  }
  report.strict = strict;
  return report;
}

void BoundTally::add(const BoundReport& report) {
  ++samples;
  count(mandelstam_tamm, report.mandelstam_tamm);
  count(margolus_levitin, report.margolus_levitin);
  count(modified_ml, report.modified_ml);
  if (report.strict) count(strict_mandelstam_tamm, report.strict->mandelstam_tamm);
}

void BoundTally::merge(const BoundTally& other) {
  samples += other.samples;
  add_counter(mandelstam_tamm, other.mandelstam_tamm);
  add_counter(margolus_levitin, other.margolus_levitin);
  add_counter(modified_ml, other.modified_ml);
  add_counter(strict_mandelstam_tamm, other.strict_mandelstam_tamm);
}

}  // namespace qdist

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


#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "qdist/bounds.hpp"
#include "qdist/dynamics.hpp"

namespace qdist {
namespace {

constexpr double kPi = std::numbers::pi;

ProbabilityVector weights(std::vector<double> w) { return ProbabilityVector::from_weights(w); }

TEST(EnergyMoments, Examples) {
  const EnergyMoments ground = energy_moments(weights({1.0, 0.0, 0.0}), harmonic_spectrum(3, 1.0));
  EXPECT_EQ(ground.e_above_ground, 0.0);
  EXPECT_EQ(ground.delta_e, 0.0);

  const EnergyMoments half = energy_moments(weights({0.5, 0.5}), harmonic_spectrum(2, 1.0));
  EXPECT_DOUBLE_EQ(half.e_above_ground, 0.5);
  EXPECT_DOUBLE_EQ(half.delta_e, 0.5);

  for (int n = 2; n <= 20; ++n) {
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    w.front() = w.back() = 0.5;
    const EnergyMoments m = energy_moments(weights(w), harmonic_spectrum(n, 1.0));
    EXPECT_NEAR(m.e_above_ground, (n - 1) / 2.0, 1e-12);
    EXPECT_NEAR(m.delta_e, (n - 1) / 2.0, 1e-12);
  }
}

TEST(EnergyMoments, AtomicGroundIsMinusOmega) {
  const EnergyMoments m = energy_moments(weights({1.0, 0.0, 0.0}), atomic_spectrum(3, 2.0));
  EXPECT_EQ(m.e_above_ground, 0.0);
  const EnergyMoments top = energy_moments(weights({0.0, 0.0, 1.0}), atomic_spectrum(3, 2.0));
  EXPECT_NEAR(top.e_above_ground, 2.0 - 2.0 / 9.0, 1e-15);
  EXPECT_EQ(top.delta_e, 0.0);
}

TEST(MandelstamTamm, Examples) {
  EXPECT_EQ(*mandelstam_tamm_bound(3.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(*mandelstam_tamm_bound(1.0, 0.0), kPi / 2.0);
  EXPECT_DOUBLE_EQ(*mandelstam_tamm_bound(2.0, 0.25), kPi / 6.0);
  EXPECT_FALSE(mandelstam_tamm_bound(0.0, 0.5).has_value());
  EXPECT_THROW(mandelstam_tamm_bound(1.0, 1.5), std::invalid_argument);
  EXPECT_THROW(mandelstam_tamm_bound(1.0, -0.1), std::invalid_argument);
}

TEST(MandelstamTamm, SmallEtaExpansion) {
  for (double eta : {1e-8, 1e-6, 1e-4}) {
    const double approx = kPi / 2.0 * (1.0 - 2.0 * std::sqrt(eta) / kPi);
    EXPECT_NEAR(*mandelstam_tamm_bound(1.0, eta), approx, 2.0 * eta);
  }
}

TEST(MargolusLevitin, Examples) {
  EXPECT_DOUBLE_EQ(*margolus_levitin_bound(1.0), kPi / 2.0);
  EXPECT_DOUBLE_EQ(*margolus_levitin_bound(kPi / 2.0), 1.0);
  EXPECT_FALSE(margolus_levitin_bound(0.0).has_value());
}

TEST(ModifiedMargolusLevitin, Examples) {
  EXPECT_DOUBLE_EQ(*modified_ml_bound(1.3, 0.0), *margolus_levitin_bound(1.3));
  EXPECT_EQ(*modified_ml_bound(1.3, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(*modified_ml_bound(1.0, 0.25), kPi / 4.0);
  EXPECT_FALSE(modified_ml_bound(0.0, 0.5).has_value());
  for (int k = 0; k <= 100; ++k) {
    EXPECT_LE(*modified_ml_bound(0.7, k / 100.0), *margolus_levitin_bound(0.7));
  }
}

TEST(CheckBounds, SaturatedEqualSuperposition) {
  const Spectrum s = harmonic_spectrum(2, 1.0);
  const ProbabilityVector p = weights({0.5, 0.5});
  const OptimizationResult r = maximize_distinguishability(p, s, search_window(s));
  const BoundReport rep = check_bounds(r, p, s);
  EXPECT_NEAR(rep.eta, 0.0, 1e-12);
  ASSERT_TRUE(rep.margolus_levitin.applicable());
  EXPECT_NEAR(*rep.margolus_levitin.bound, kPi, 1e-12);
  EXPECT_NEAR(rep.tau, kPi, 1e-9);
  EXPECT_TRUE(rep.mandelstam_tamm.satisfied);
  EXPECT_TRUE(rep.margolus_levitin.satisfied);
  EXPECT_TRUE(rep.modified_ml.satisfied);
  EXPECT_FALSE(rep.strict.has_value());
}

TEST(CheckBounds, StationaryStateNotApplicable) {
  const Spectrum s = harmonic_spectrum(2, 1.0);
  const ProbabilityVector p = weights({1.0, 0.0});
  const BoundReport rep = check_bounds(maximize_distinguishability(p, s, search_window(s)), p, s);
  EXPECT_EQ(rep.eta, 1.0);
  EXPECT_FALSE(rep.mandelstam_tamm.applicable());
  EXPECT_FALSE(rep.margolus_levitin.applicable());
  EXPECT_FALSE(rep.modified_ml.applicable());
  EXPECT_FALSE(rep.mandelstam_tamm.violated());
}

TEST(CheckBounds, ViolationNeedsApplicability) {
  BoundCheck c;
  c.satisfied = false;
  EXPECT_FALSE(c.violated());
  c.bound = 1.0;
  EXPECT_TRUE(c.violated());
}

TEST(CheckBounds, MandelstamTammHoldsOnRandomStates) {
  for (int i = 0; i < 500; ++i) {
    for (SpectrumClass k : {SpectrumClass::Harmonic, SpectrumClass::Atomic}) {
      const int n = 2 + i % 6;
      const Spectrum s = Spectrum::make(k, n, 1.0);
      const ProbabilityVector p = sample_state(n, substream(61, i));
      const OptimizationResult r = maximize_distinguishability(p, s, search_window(s));
      const BoundReport rep = check_bounds(r, p, s);
      ASSERT_TRUE(rep.mandelstam_tamm.applicable());
      EXPECT_GE(rep.tau + kBoundTimeTolerance, *rep.mandelstam_tamm.bound);
      EXPECT_TRUE(rep.mandelstam_tamm.satisfied);
    }
  }
}

TEST(CheckBounds, StrictReportsFirstPassage) {
  const Spectrum s = harmonic_spectrum(4, 1.0);
  for (int i = 0; i < 50; ++i) {
    const ProbabilityVector p = sample_state(4, substream(71, i));
    const OptimizationResult r = maximize_distinguishability(p, s, search_window(s));
    const BoundReport rep = check_bounds_strict(r, p, s, GridConfig{});
    ASSERT_TRUE(rep.strict.has_value());
    const StrictCheck& st = *rep.strict;
    EXPECT_NEAR(st.target_d, (1.0 - rep.eta) * r.d_max, 1e-15);
    ASSERT_TRUE(st.first_time.has_value());
    EXPECT_LE(*st.first_time, r.tau + 1e-9);
    EXPECT_GE(distinguishability_at(p, s, *st.first_time), st.target_d - 1e-9);
    EXPECT_FALSE(st.mandelstam_tamm.violated());
  }
}

TEST(BoundTally, CountsAndMerges) {
  BoundReport ok;
  ok.mandelstam_tamm.bound = 1.0;
  BoundReport bad = ok;
  bad.mandelstam_tamm.satisfied = false;
  BoundReport none;

  BoundTally a;
  a.add(ok);
  a.add(bad);
  BoundTally b;
  b.add(none);
  a.merge(b);
  EXPECT_EQ(a.samples, 3);
  EXPECT_EQ(a.mandelstam_tamm.applicable, 2);
  EXPECT_EQ(a.mandelstam_tamm.violated, 1);
  EXPECT_DOUBLE_EQ(a.mandelstam_tamm.violation_rate(), 0.5);
  EXPECT_EQ(a.margolus_levitin.applicable, 0);
  EXPECT_EQ(a.margolus_levitin.violation_rate(), 0.0);
}

}  // namespace
}  // namespace qdist

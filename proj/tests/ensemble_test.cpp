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
#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "qdist/dynamics.hpp"
#include "qdist/ensemble.hpp"

namespace qdist {
namespace {

TEST(Histogram, BinEdges) {
  const std::vector<double> top = {1.0, 1.0};
  const Histogram a = histogram(top, 0.01, Normalization::RawCounts);
  EXPECT_EQ(a.bins(), 100u);
  EXPECT_EQ(a.counts()[99], 2);

  const std::vector<double> edges = {0.005, 0.015};
  const Histogram b = histogram(edges, 0.01, Normalization::RawCounts);
  EXPECT_EQ(b.counts()[0], 1);
  EXPECT_EQ(b.counts()[1], 1);
  EXPECT_EQ(b.total(), 2);

  const std::vector<double> exact = {0.0, 0.01, 0.5};
  const Histogram c = histogram(exact, 0.01, Normalization::RawCounts);
  EXPECT_EQ(c.counts()[0], 1);
  EXPECT_EQ(c.counts()[1], 1);
  EXPECT_EQ(c.counts()[50], 1);
}

TEST(Histogram, RejectsOutOfRange) {
  Histogram h;
  EXPECT_NO_THROW(h.add(1.0 + 5e-10));
  EXPECT_NO_THROW(h.add(-5e-10));
  EXPECT_EQ(h.counts()[99], 1);
  EXPECT_EQ(h.counts()[0], 1);
  EXPECT_THROW(h.add(1.01), std::domain_error);
  EXPECT_THROW(h.add(-0.01), std::domain_error);
  EXPECT_THROW(Histogram(0.0), std::invalid_argument);
  EXPECT_THROW(Histogram(0.3), std::invalid_argument);
}

TEST(Histogram, Normalizations) {
  const std::vector<double> s = {0.1, 0.1, 0.5, 1.0};
  const Histogram h = histogram(s, 0.1, Normalization::TotalOne);
  const std::vector<double> total = h.normalized(Normalization::TotalOne);
  EXPECT_DOUBLE_EQ(total[1], 0.5);
  EXPECT_DOUBLE_EQ(total[9], 0.25);
  const std::vector<double> top = h.normalized(Normalization::TopBinOne);
  EXPECT_DOUBLE_EQ(top[9], 1.0);
  EXPECT_DOUBLE_EQ(top[1], 2.0);
  const std::vector<double> raw = h.normalized(Normalization::RawCounts);
  EXPECT_DOUBLE_EQ(raw[5], 1.0);

  const std::vector<double> low = {0.2};
  const std::vector<double> empty_top = histogram(low, 0.1, Normalization::TopBinOne).normalized();
  for (double v : empty_top) EXPECT_EQ(v, 0.0);

  EXPECT_EQ(parse_normalization("top"), Normalization::TopBinOne);
  EXPECT_EQ(to_string(Normalization::RawCounts), "raw");
  EXPECT_THROW(parse_normalization("peak"), std::invalid_argument);
}

TEST(Histogram, CountsSumToSamples) {
  std::vector<double> s;
  for (int i = 0; i < 1000; ++i) s.push_back(std::fmod(i * 0.6180339887, 1.0));
  const Histogram h = Histogram::from_samples(s);
  std::int64_t sum = 0;
  for (std::int64_t c : h.counts()) sum += c;
  EXPECT_EQ(sum, 1000);
  EXPECT_EQ(h.total(), 1000);
}

TEST(ThresholdCurve, EndpointsAndMonotone) {
  const std::vector<double> s = {0.2, 0.5, 0.9, 1.0};
  const std::vector<double> eps = uniform_epsilon_grid(101);
  ASSERT_EQ(eps.size(), 101u);
  EXPECT_EQ(eps.front(), 0.0);
  EXPECT_EQ(eps.back(), 1.0);
  const ThresholdCurve c = threshold_curve(s, eps);
  EXPECT_EQ(c.samples, 4);
  EXPECT_DOUBLE_EQ(c.probabilities.front(), 0.25);
  EXPECT_DOUBLE_EQ(c.probabilities.back(), 1.0);
  EXPECT_DOUBLE_EQ(c.probabilities[50], 0.75);
  for (std::size_t k = 1; k < eps.size(); ++k) {
    EXPECT_GE(c.probabilities[k], c.probabilities[k - 1]);
  }
  EXPECT_DOUBLE_EQ(c.standard_errors[50], std::sqrt(0.75 * 0.25 / 4.0));
}

TEST(ThresholdCurve, Errors) {
  const std::vector<double> none;
  const std::vector<double> eps = {0.0, 1.0};
  EXPECT_THROW(threshold_curve(none, eps), std::invalid_argument);
  const std::vector<double> s = {0.5};
  const std::vector<double> unsorted = {0.5, 0.1};
  EXPECT_THROW(threshold_curve(s, unsorted), std::invalid_argument);
  const std::vector<double> outside = {0.0, 1.5};
  EXPECT_THROW(threshold_curve(s, outside), std::invalid_argument);
}

TEST(SummaryStats, Examples) {
  const std::vector<double> ones = {1.0, 1.0, 1.0};
  const EnsembleStats a = summary_stats(ones);
  EXPECT_EQ(a.mean_d, 1.0);
  EXPECT_EQ(a.std_d, 0.0);
  EXPECT_EQ(a.n, 3);
  const std::vector<double> two = {0.0, 1.0};
  const EnsembleStats b = summary_stats(two);
  EXPECT_DOUBLE_EQ(b.mean_d, 0.5);
  EXPECT_DOUBLE_EQ(b.std_d, 0.5);
  const std::vector<double> none;
  EXPECT_THROW(summary_stats(none), std::invalid_argument);
}

TEST(RunningStats, MergeMatchesSinglePass) {
  std::vector<double> xs;
  for (int i = 0; i < 10001; ++i) xs.push_back(std::sin(i * 0.37) * 0.5 + 0.5);
  RunningStats all;
  for (double x : xs) all.add(x);
  RunningStats left;
  RunningStats right;
  for (std::size_t i = 0; i < xs.size(); ++i) (i < 3333 ? left : right).add(xs[i]);
  RunningStats merged = left;
  merged.merge(right);
  EXPECT_EQ(merged.count(), all.count());
  EXPECT_NEAR(merged.mean(), all.mean(), 1e-12);
  EXPECT_NEAR(merged.variance(), all.variance(), 1e-12);

  RunningStats empty;
  RunningStats copy = all;
  copy.merge(empty);
  EXPECT_EQ(copy.mean(), all.mean());
  EXPECT_EQ(copy.variance(), all.variance());
}

CellAggregate aggregate_of(const std::vector<double>& ds) {
  CellAggregate agg(3, SpectrumClass::Harmonic, 0.01);
  for (double d : ds) {
    OptimizationResult r;
    r.d_max = d;
    agg.add(r, BoundReport{});
  }
  return agg;
}

TEST(CellAggregate, MergeIdentityAndCommutativity) {
  const CellAggregate a = aggregate_of({0.1, 0.5, 0.99});
  const CellAggregate b = aggregate_of({0.3, 0.3});
  const CellAggregate empty(3, SpectrumClass::Harmonic, 0.01);

  const CellAggregate ae = merge(a, empty);
  EXPECT_TRUE(std::equal(ae.histogram.counts().begin(), ae.histogram.counts().end(),
                         a.histogram.counts().begin()));
  EXPECT_EQ(ae.stats.mean(), a.stats.mean());

  const CellAggregate ab = merge(a, b);
  const CellAggregate ba = merge(b, a);
  EXPECT_TRUE(std::equal(ab.histogram.counts().begin(), ab.histogram.counts().end(),
                         ba.histogram.counts().begin()));
  EXPECT_EQ(ab.histogram.total(), 5);
  EXPECT_NEAR(ab.stats.mean(), ba.stats.mean(), 1e-15);

  const CellAggregate other(4, SpectrumClass::Harmonic, 0.01);
  EXPECT_THROW(merge(a, other), std::invalid_argument);
}

TEST(RunConfig, Validation) {
  RunConfig cfg;
  EXPECT_EQ(cfg.dims.size(), 19u);
  EXPECT_EQ(cfg.dims.front(), 2);
  EXPECT_EQ(cfg.dims.back(), 20);
  EXPECT_EQ(cfg.samples_per_dim, 100000);
  EXPECT_NO_THROW(cfg.validate());
  cfg.samples_per_dim = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.dims = {1, 2};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.omega = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.classes.clear();
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(RunEnsemble, WorkerCountDoesNotMatter) {
  RunConfig cfg;
  cfg.dims = {2, 4, 6};
  cfg.samples_per_dim = 700;
  cfg.master_seed = 99;
  RunOptions one;
  one.workers = 1;
  RunOptions many;
  many.workers = 5;
  const EnsembleResult a = run_ensemble(cfg, one);
  const EnsembleResult b = run_ensemble(cfg, many);
  ASSERT_EQ(a.cells.size(), 6u);
  ASSERT_EQ(b.cells.size(), 6u);
  for (std::size_t c = 0; c < a.cells.size(); ++c) {
    EXPECT_EQ(a.cells[c].d_values, b.cells[c].d_values);
    EXPECT_EQ(a.cells[c].taus, b.cells[c].taus);
    EXPECT_EQ(a.cells[c].aggregate.stats.mean(), b.cells[c].aggregate.stats.mean());
    EXPECT_EQ(a.cells[c].aggregate.stats.variance(), b.cells[c].aggregate.stats.variance());
  }
}

TEST(RunEnsemble, SamplesMatchDirectOptimization) {
  RunConfig cfg;
  cfg.dims = {5};
  cfg.classes = {SpectrumClass::Atomic};
  cfg.samples_per_dim = 20;
  const EnsembleResult r = run_ensemble(cfg);
  const CellResult& c = r.cell(5, SpectrumClass::Atomic);
  EXPECT_TRUE(c.window.truncated);
  const Spectrum s = atomic_spectrum(5, 1.0);
  for (std::int64_t i = 0; i < 20; ++i) {
    const OptimizationResult o =
        maximize_distinguishability(state_for_sample(cfg, 5, i), s, search_window(s));
    EXPECT_EQ(c.d_values[static_cast<std::size_t>(i)], o.d_max);
  }
  EXPECT_DOUBLE_EQ(c.aggregate.summary().truncated_fraction, 1.0);
  EXPECT_THROW(r.cell(6, SpectrumClass::Atomic), std::out_of_range);
}

// E[4 p1 p2] under Beta(1/2, 1/2) is 0.5 (numerical quadrature of the density).
TEST(RunEnsemble, TwoLevelMoments) {
  RunConfig cfg;
  cfg.dims = {2};
  cfg.classes = {SpectrumClass::Harmonic};
  cfg.samples_per_dim = 100000;
  const EnsembleResult r = run_ensemble(cfg);
  const CellResult& c = r.cells.front();
  EXPECT_NEAR(c.aggregate.summary().mean_d, 0.5, 0.01);
  const std::vector<double> eps = {0.01, 0.5};
  const ThresholdCurve t = threshold_curve(c.d_values, eps);
  EXPECT_NEAR(t.probabilities[1], 0.5, 0.005);
  EXPECT_NEAR(t.probabilities[0], n2_threshold_probability(0.01), 4.0 * t.standard_errors[0]);
}

TEST(RunEnsemble, ThresholdsGrowWithDimension) {
  RunConfig cfg;
  cfg.dims = {2, 3, 4, 5, 6};
  cfg.classes = {SpectrumClass::Harmonic};
  cfg.samples_per_dim = 4000;
  const EnsembleResult r = run_ensemble(cfg);
  const std::vector<double> eps = {0.05, 0.2, 0.5};
  for (std::size_t c = 1; c < r.cells.size(); ++c) {
    const ThresholdCurve lo = threshold_curve(r.cells[c - 1].d_values, eps);
    const ThresholdCurve hi = threshold_curve(r.cells[c].d_values, eps);
    for (std::size_t k = 0; k < eps.size(); ++k) {
      const double se = std::hypot(lo.standard_errors[k], hi.standard_errors[k]);
      EXPECT_GE(hi.probabilities[k], lo.probabilities[k] - 3.0 * se);
    }
  }
}

TEST(RunEnsemble, AtomicBeatsHarmonicAtTen) {
  RunConfig cfg;
  cfg.dims = {10};
  cfg.samples_per_dim = 1500;
  const EnsembleResult r = run_ensemble(cfg);
  const EnsembleStats h = r.cell(10, SpectrumClass::Harmonic).aggregate.summary();
  const EnsembleStats a = r.cell(10, SpectrumClass::Atomic).aggregate.summary();
  EXPECT_GT(a.mean_d, h.mean_d);
}

TEST(RunEnsemble, KeepsReportsOnRequest) {
  RunConfig cfg;
  cfg.dims = {3};
  cfg.samples_per_dim = 50;
  RunOptions opts;
  opts.keep_reports = true;
  opts.strict_bounds = true;
  const EnsembleResult r = run_ensemble(cfg, opts);
  for (const CellResult& c : r.cells) {
    ASSERT_EQ(c.reports.size(), 50u);
    EXPECT_TRUE(c.reports.front().strict.has_value());
    EXPECT_EQ(c.aggregate.bounds.samples, 50);
    EXPECT_EQ(c.aggregate.bounds.mandelstam_tamm.violated, 0);
  }
}

}  // namespace
}  // namespace qdist

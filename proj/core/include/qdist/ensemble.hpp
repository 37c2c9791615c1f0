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
#include <span>
#include <string_view>
#include <vector>

#include "qdist/bounds.hpp"
#include "qdist/dynamics.hpp"
#include "qdist/sampling.hpp"
#include "qdist/spectra.hpp"

namespace qdist {

enum class Normalization { TotalOne, TopBinOne, RawCounts };

std::string_view to_string(Normalization mode);
/// Accepts "total", "top" or "raw".
Normalization parse_normalization(std::string_view name);

/// Counts of D values in bins of equal width over [0, 1]. Bins are half-open
/// [k w, (k+1) w) except the last, which is closed at 1. Raw counts are kept;
/// `normalization` only selects how normalized() scales them.
class Histogram {
 public:
  explicit Histogram(double bin_width = 0.01,
                     Normalization normalization = Normalization::TotalOne);

  static Histogram from_samples(std::span<const double> samples, double bin_width = 0.01,
                                Normalization normalization = Normalization::TotalOne);

  /// Values may stray outside [0, 1] by 1e-9 and are clamped; anything
  /// further out throws std::domain_error.
  void add(double d);
  void merge(const Histogram& other);

  double bin_width() const noexcept { return bin_width_; }
  std::size_t bins() const noexcept { return counts_.size(); }
  double bin_lower(std::size_t k) const noexcept {
    return static_cast<double>(k) * bin_width_;
  }
  std::span<const std::int64_t> counts() const noexcept { return counts_; }
  std::int64_t total() const noexcept { return total_; }

  Normalization normalization() const noexcept { return normalization_; }
  void set_normalization(Normalization mode) noexcept { normalization_ = mode; }

  /// Counts scaled to the selected normalization. TopBinOne divides by the
  /// count in the D = 1 bin and yields zeros when that bin is empty.
  std::vector<double> normalized() const { return normalized(normalization_); }
  std::vector<double> normalized(Normalization mode) const;

 private:
  double bin_width_;
  Normalization normalization_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

Histogram histogram(std::span<const double> samples, double bin_width,
                    Normalization normalization);

/// P(D >= 1 - epsilon) over an epsilon grid.
struct ThresholdCurve {
  std::vector<double> epsilons;
  std::vector<double> probabilities;
  /// Binomial standard errors sqrt(P (1 - P) / n).
  std::vector<double> standard_errors;
  std::int64_t samples = 0;
};

/// `epsilon_grid` must be sorted and inside [0, 1]. D values within 1e-9
/// of a threshold count as reaching it.
ThresholdCurve threshold_curve(std::span<const double> samples,
                               std::span<const double> epsilon_grid);

/// `points` uniform values on [0, 1], both ends included.
std::vector<double> uniform_epsilon_grid(int points = 101);

/// One-pass mean/variance accumulator (Welford) with the pooled merge of
/// Chan et al.
class RunningStats {
 public:
  void add(double x) noexcept;
  void merge(const RunningStats& other) noexcept;

  std::int64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Population variance.
  double variance() const noexcept { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct EnsembleStats {
  double mean_d = 0.0;
  /// Population standard deviation.
  double std_d = 0.0;
  std::int64_t n = 0;
  double truncated_fraction = 0.0;
};

/// Throws std::invalid_argument on empty input.
EnsembleStats summary_stats(std::span<const double> samples);

/// Mergeable aggregate for one (dimension, class) cell.
struct CellAggregate {
  int dim = 0;
  SpectrumClass kind = SpectrumClass::Harmonic;
  Histogram histogram;
  RunningStats stats;
  std::int64_t truncated = 0;
  BoundTally bounds;

  CellAggregate() = default;
  CellAggregate(int dim, SpectrumClass kind, double bin_width);

  void add(const OptimizationResult& result, const BoundReport& report);
  EnsembleStats summary() const;
};

/// Adds counts and pools statistics. Throws std::invalid_argument when the
/// dimension, class or bin width differ.
CellAggregate merge(const CellAggregate& a, const CellAggregate& b);

struct RunConfig {
  std::vector<int> dims = default_dims();
  std::vector<SpectrumClass> classes = {SpectrumClass::Harmonic, SpectrumClass::Atomic};
  std::int64_t samples_per_dim = 100000;
  double omega = 1.0;
  std::uint64_t master_seed = 1;
  GridConfig grid;
  SearchCap cap;
  double bin_width = 0.01;

  static std::vector<int> default_dims();
  void validate() const;
};

/// Execution knobs that do not influence results.
struct RunOptions {
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Keep one BoundReport per sample in CellResult::reports.
  bool keep_reports = false;
  /// Also compute the first-passage StrictCheck for every sample.
  bool strict_bounds = false;
};

struct CellResult {
  int dim = 0;
  SpectrumClass kind = SpectrumClass::Harmonic;
  TimeWindow window;
  /// Per-sample values in sample order.
  std::vector<double> d_values;
  std::vector<double> taus;
  std::vector<BoundReport> reports;
  CellAggregate aggregate;
};

struct EnsembleResult {
  RunConfig config;
  std::vector<CellResult> cells;

  /// Throws std::out_of_range if the cell was not part of the run.
  const CellResult& cell(int dim, SpectrumClass kind) const;
};

/// Seed stream of sample `index` in dimension `dim`. Both spectrum classes
/// of a dimension see the same states.
SeededStream sample_stream(std::uint64_t master_seed, int dim, std::int64_t index);

/// Regenerates the state drawn for one sample of a run.
ProbabilityVector state_for_sample(const RunConfig& cfg, int dim, std::int64_t index);

/// Samples, optimises and aggregates every (dim, class) cell. Results depend
/// on `cfg` only: work is split into fixed blocks that are reduced in index
/// order whatever the worker count.
EnsembleResult run_ensemble(const RunConfig& cfg, const RunOptions& options = {});

}  // namespace qdist

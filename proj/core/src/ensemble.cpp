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

#include "qdist/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace qdist {
namespace {

constexpr double kRangeSlack = 1e-9;
constexpr std::int64_t kBlockSize = 256;

struct Block {
  std::size_t cell;
  std::int64_t begin;
  std::int64_t end;
};

struct BlockOutput {
  std::vector<double> d_values;
  std::vector<double> taus;
  std::vector<BoundReport> reports;
  CellAggregate aggregate;
};

}  // namespace

std::string_view to_string(Normalization mode) {
  switch (mode) {
    case Normalization::TotalOne:
      return "total";
    case Normalization::TopBinOne:
      return "top";
    case Normalization::RawCounts:
      return "raw";
  }
  return "unknown";
}

Normalization parse_normalization(std::string_view name) {
  if (name == "total") return Normalization::TotalOne;
  if (name == "top") return Normalization::TopBinOne;
  if (name == "raw") return Normalization::RawCounts;
  throw std::invalid_argument("unknown normalization '" + std::string(name) + "'");
}

Histogram::Histogram(double bin_width, Normalization normalization)
    : bin_width_(bin_width), normalization_(normalization) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) {
    throw std::invalid_argument("bin width must lie in (0, 1]");
  }
  const double bins = std::round(1.0 / bin_width);
  if (std::abs(bins * bin_width - 1.0) > 1e-9) {
    throw std::invalid_argument("bin width must divide [0, 1] evenly");
  }
  counts_.assign(static_cast<std::size_t>(bins), 0);
}

Histogram Histogram::from_samples(std::span<const double> samples, double bin_width,
                                  Normalization normalization) {
  Histogram h(bin_width, normalization);
  for (double d : samples) h.add(d);
  return h;
}

void Histogram::add(double d) {
  if (!(d >= -kRangeSlack && d <= 1.0 + kRangeSlack)) {
    throw std::domain_error("distinguishability " + std::to_string(d) +
                            " outside [0, 1]");
  }
  d = std::clamp(d, 0.0, 1.0);
  const auto last = counts_.size() - 1;
  const auto k = std::min(last, static_cast<std::size_t>(d / bin_width_));
  ++counts_[k];
  ++total_;
}

void Histogram::merge(const Histogram& other) {
  if (other.counts_.size() != counts_.size() || other.bin_width_ != bin_width_) {
    throw std::invalid_argument("cannot merge histograms with different bins");
  }
  for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
  total_ += other.total_;
}

std::vector<double> Histogram::normalized(Normalization mode) const {
  std::vector<double> out(counts_.size(), 0.0);
  double scale = 1.0;
  switch (mode) {
    case Normalization::TotalOne:
      scale = static_cast<double>(total_);
      break;
    case Normalization::TopBinOne:
      scale = static_cast<double>(counts_.back());
      break;
    case Normalization::RawCounts:
      scale = 1.0;
      break;
  }
  if (scale == 0.0) return out;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    out[k] = static_cast<double>(counts_[k]) / scale;
  }
  return out;
}

Histogram histogram(std::span<const double> samples, double bin_width,
                    Normalization normalization) {
  return Histogram::from_samples(samples, bin_width, normalization);
}

ThresholdCurve threshold_curve(std::span<const double> samples,
                               std::span<const double> epsilon_grid) {
  if (samples.empty()) {
    throw std::invalid_argument("threshold curve of an empty sample");
  }
  if (!std::is_sorted(epsilon_grid.begin(), epsilon_grid.end())) {
    throw std::invalid_argument("epsilon grid must be sorted");
  }
  if (!epsilon_grid.empty() && (epsilon_grid.front() < 0.0 || epsilon_grid.back() > 1.0)) {
    throw std::invalid_argument("epsilon grid must lie in [0, 1]");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());

  ThresholdCurve curve;
  curve.samples = static_cast<std::int64_t>(sorted.size());
  for (double eps : epsilon_grid) {
    const double threshold = 1.0 - eps - kRangeSlack;
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), threshold);
    const double prob = static_cast<double>(sorted.end() - first) / n;
    curve.epsilons.push_back(eps);
    curve.probabilities.push_back(prob);
    curve.standard_errors.push_back(std::sqrt(prob * (1.0 - prob) / n));
  }
  return curve;
}

std::vector<double> uniform_epsilon_grid(int points) {
  if (points < 2) throw std::invalid_argument("epsilon grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    grid[static_cast<std::size_t>(k)] = static_cast<double>(k) / (points - 1);
  }
  return grid;
}

void RunningStats::add(double x) noexcept {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const auto na = static_cast<double>(n_);
  const auto nb = static_cast<double>(other.n_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  n_ += other.n_;
}

EnsembleStats summary_stats(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("summary statistics of an empty sample");
  }
  RunningStats acc;
  for (double d : samples) acc.add(d);
  return {acc.mean(), std::sqrt(acc.variance()), acc.count(), 0.0};
}

CellAggregate::CellAggregate(int dim_, SpectrumClass kind_, double bin_width)
    : dim(dim_), kind(kind_), histogram(bin_width) {}

void CellAggregate::add(const OptimizationResult& result, const BoundReport& report) {
  histogram.add(result.d_max);
  stats.add(result.d_max);
  if (result.truncated) ++truncated;
  bounds.add(report);
}

EnsembleStats CellAggregate::summary() const {
  EnsembleStats s;
  s.n = stats.count();
  s.mean_d = stats.mean();
  s.std_d = std::sqrt(stats.variance());
  s.truncated_fraction =
      s.n == 0 ? 0.0 : static_cast<double>(truncated) / static_cast<double>(s.n);
  return s;
}

CellAggregate merge(const CellAggregate& a, const CellAggregate& b) {
  if (a.dim != b.dim || a.kind != b.kind ||
      a.histogram.bin_width() != b.histogram.bin_width()) {
    throw std::invalid_argument("cannot merge aggregates of different cells");
  }
  CellAggregate out = a;
  out.histogram.merge(b.histogram);
  out.stats.merge(b.stats);
  out.truncated += b.truncated;
  out.bounds.merge(b.bounds);
  return out;
}

std::vector<int> RunConfig::default_dims() {
  std::vector<int> dims;
  for (int n = 2; n <= 20; ++n) dims.push_back(n);
  return dims;
}

void RunConfig::validate() const {
  if (dims.empty()) throw std::invalid_argument("no dimensions requested");
  for (int n : dims) {
    if (n < 2) throw std::invalid_argument("dimensions must be >= 2");
  }
  if (classes.empty()) throw std::invalid_argument("no spectrum classes requested");
  if (samples_per_dim < 1) throw std::invalid_argument("samples_per_dim must be >= 1");
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("omega must be positive and finite");
  }
  if (!(cap.multiplier > 0.0)) throw std::invalid_argument("cap multiplier must be positive");
  grid.validate();
  Histogram probe(bin_width);
  (void)probe;
}

const CellResult& EnsembleResult::cell(int dim, SpectrumClass kind) const {
  for (const CellResult& c : cells) {
    if (c.dim == dim && c.kind == kind) return c;
  }
  throw std::out_of_range("no cell for N=" + std::to_string(dim) + " " +
                          std::string(to_string(kind)));
}

SeededStream sample_stream(std::uint64_t master_seed, int dim, std::int64_t index) {
  const std::uint64_t dim_seed =
      mix64(master_seed ^ (0xd1b54a32d192ed03ULL * static_cast<std::uint64_t>(dim)));
  return substream(dim_seed, static_cast<std::uint64_t>(index));
}

ProbabilityVector state_for_sample(const RunConfig& cfg, int dim, std::int64_t index) {
  return sample_state(dim, sample_stream(cfg.master_seed, dim, index));
}

EnsembleResult run_ensemble(const RunConfig& cfg, const RunOptions& options) {
  cfg.validate();

  EnsembleResult out;
  out.config = cfg;
  std::vector<Spectrum> spectra;
  for (int dim : cfg.dims) {
    for (SpectrumClass kind : cfg.classes) {
      CellResult cell;
      cell.dim = dim;
      cell.kind = kind;
      spectra.push_back(Spectrum::make(kind, dim, cfg.omega));
      cell.window = search_window(spectra.back(), cfg.cap);
      cell.aggregate = CellAggregate(dim, kind, cfg.bin_width);
      out.cells.push_back(std::move(cell));
    }
  }

  std::vector<Block> blocks;
  for (std::size_t c = 0; c < out.cells.size(); ++c) {
    for (std::int64_t b = 0; b < cfg.samples_per_dim; b += kBlockSize) {
      blocks.push_back({c, b, std::min(cfg.samples_per_dim, b + kBlockSize)});
    }
  }
  std::vector<BlockOutput> outputs(blocks.size());

  auto run_block = [&](std::size_t index) {
    const Block& block = blocks[index];
    const CellResult& cell = out.cells[block.cell];
    const Spectrum& spectrum = spectra[block.cell];
    BlockOutput& o = outputs[index];
    o.aggregate = CellAggregate(cell.dim, cell.kind, cfg.bin_width);
    const auto n = static_cast<std::size_t>(block.end - block.begin);
    o.d_values.reserve(n);
    o.taus.reserve(n);
    for (std::int64_t i = block.begin; i < block.end; ++i) {
      const ProbabilityVector p = state_for_sample(cfg, cell.dim, i);
      const OptimizationResult r =
          maximize_distinguishability(p, spectrum, cell.window, cfg.grid);
      BoundReport report = options.strict_bounds
                               ? check_bounds_strict(r, p, spectrum, cfg.grid)
                               : check_bounds(r, p, spectrum);
      o.aggregate.add(r, report);
      o.d_values.push_back(r.d_max);
      o.taus.push_back(r.tau);
      if (options.keep_reports) o.reports.push_back(std::move(report));
    }
  };

  unsigned workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, std::max<std::size_t>(1, blocks.size())));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t index = next.fetch_add(1, std::memory_order_relaxed);
      if (index >= blocks.size()) return;
      try {
        run_block(index);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  // Canonical reduction: blocks are merged in index order.
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    CellResult& cell = out.cells[blocks[b].cell];
    BlockOutput& o = outputs[b];
    cell.d_values.insert(cell.d_values.end(), o.d_values.begin(), o.d_values.end());
    cell.taus.insert(cell.taus.end(), o.taus.begin(), o.taus.end());
    for (BoundReport& r : o.reports) cell.reports.push_back(std::move(r));
    cell.aggregate = merge(cell.aggregate, o.aggregate);
    o = BlockOutput{};
  }
  return out;
}

}  // namespace qdist

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

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qdist {

/// Level populations p_n = x_n^2 / r^2 of a pure state.
///
/// Phases are not represented: the survival probability depends on the
/// populations only.
class ProbabilityVector {
 public:
  /// Normalises squared coordinates. Throws if all coordinates are zero.
  static ProbabilityVector from_coordinates(std::span<const double> x);

  /// Accepts weights that are non-negative and sum to 1 within 1e-12.
  static ProbabilityVector from_weights(std::span<const double> p);

  std::size_t size() const noexcept { return p_.size(); }
  std::span<const double> values() const noexcept { return p_; }
  double operator[](std::size_t n) const { return p_[n]; }

  /// Number of strictly positive entries.
  std::size_t support_size() const noexcept;

 private:
  explicit ProbabilityVector(std::vector<double> p) : p_(std::move(p)) {}
  std::vector<double> p_;
};

/// Identifies one reproducible random stream.
struct SeededStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const SeededStream&, const SeededStream&) = default;
};

/// Counter-mode derivation: stream i depends only on (master_seed, i).
SeededStream substream(std::uint64_t master_seed, std::uint64_t sample_index);

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Random engine for one stream. The 64-bit engine seed is a keyed hash of
/// the stream coordinates.
class StreamEngine {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit StreamEngine(const SeededStream& stream);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Draws N standard normal coordinates and returns their normalised squares,
/// i.e. a Dirichlet(1/2, ..., 1/2) sample. Redraws on the r = 0 event.
ProbabilityVector sample_state(int levels, StreamEngine& engine);
ProbabilityVector sample_state(int levels, const SeededStream& stream);

}  // namespace qdist

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

#include "qdist/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qdist {

std::size_t ProbabilityVector::support_size() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(p_.begin(), p_.end(), [](double v) { return v > 0.0; }));
}

ProbabilityVector ProbabilityVector::from_coordinates(std::span<const double> x) {
  if (x.size() < 2) {
    throw std::invalid_argument("state needs at least 2 coordinates");
  }
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  if (!(r2 > 0.0) || !std::isfinite(r2)) {
    throw std::invalid_argument("state coordinates have zero or non-finite norm");
  }
  std::vector<double> p(x.size());
  std::transform(x.begin(), x.end(), p.begin(),
                 [r2](double v) { return v * v / r2; });
  return ProbabilityVector(std::move(p));
}

ProbabilityVector ProbabilityVector::from_weights(std::span<const double> p) {
  if (p.size() < 2) {
    throw std::invalid_argument("probability vector needs at least 2 entries");
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || v > 1.0) {
      throw std::invalid_argument("probability out of [0, 1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("probabilities do not sum to 1");
  }
  return ProbabilityVector(std::vector<double>(p.begin(), p.end()));
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeededStream substream(std::uint64_t master_seed, std::uint64_t sample_index) {
  return {master_seed, sample_index};
}

StreamEngine::StreamEngine(const SeededStream& stream)
    : engine_(mix64(mix64(stream.master_seed) ^
                    mix64(stream.stream_index ^ 0x5851f42d4c957f2dULL))) {}

ProbabilityVector sample_state(int levels, StreamEngine& engine) {
  if (levels < 2) {
    throw std::invalid_argument("sample_state needs N >= 2");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(levels));
  for (;;) {
    double r2 = 0.0;
    for (double& v : x) {
      v = normal(engine);
      r2 += v * v;
    }
    if (r2 > 0.0) break;
  }
  return ProbabilityVector::from_coordinates(x);
}

ProbabilityVector sample_state(int levels, const SeededStream& stream) {
  StreamEngine engine(stream);
  return sample_state(levels, engine);
}

}  // namespace qdist

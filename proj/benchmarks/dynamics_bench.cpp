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


#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "qdist/dynamics.hpp"
#include "qdist/sampling.hpp"
#include "qdist/spectra.hpp"

namespace {

using qdist::SpectrumClass;

std::vector<qdist::ProbabilityVector> states(int dim, int count) {
  std::vector<qdist::ProbabilityVector> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(qdist::sample_state(dim, qdist::substream(17, static_cast<std::uint64_t>(i))));
  }
  return out;
}

void BM_Maximize(benchmark::State& state, SpectrumClass kind) {
  const int dim = static_cast<int>(state.range(0));
  const qdist::Spectrum spectrum = qdist::Spectrum::make(kind, dim, 1.0);
  const qdist::TimeWindow window = qdist::search_window(spectrum);
  const auto pool = states(dim, 64);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto r = qdist::maximize_distinguishability(pool[i++ % pool.size()], spectrum, window);
    benchmark::DoNotOptimize(r.d_max);
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_MaximizeHarmonic(benchmark::State& state) { BM_Maximize(state, SpectrumClass::Harmonic); }
void BM_MaximizeAtomic(benchmark::State& state) { BM_Maximize(state, SpectrumClass::Atomic); }

BENCHMARK(BM_MaximizeHarmonic)->Arg(2)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MaximizeAtomic)->Arg(2)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Survival(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const qdist::Spectrum spectrum = qdist::atomic_spectrum(dim, 1.0);
  const auto p = states(dim, 1).front();
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qdist::survival_probability(p, spectrum, t));
    t += 0.37;
  }
}
BENCHMARK(BM_Survival)->Arg(5)->Arg(20);

void BM_Lcm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qdist::lcm_of_squares(n));
}
BENCHMARK(BM_Lcm)->Arg(20)->Arg(100);

void BM_SampleState(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qdist::sample_state(dim, qdist::substream(3, i++)));
  }
}
BENCHMARK(BM_SampleState)->Arg(2)->Arg(20);

}  // namespace

BENCHMARK_MAIN();

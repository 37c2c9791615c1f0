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

#include "qdist/spectra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/integer/common_factor_rt.hpp>

namespace qdist {
namespace {

void check_spectrum_args(int levels, double omega) {
  if (levels < 2) {
    throw std::invalid_argument("spectrum needs at least 2 levels, got " +
                                std::to_string(levels));
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("omega must be positive and finite");
  }
}

}  // namespace

std::string_view to_string(SpectrumClass kind) {
  switch (kind) {
    case SpectrumClass::Harmonic:
      return "harmonic";
    case SpectrumClass::Atomic:
      return "atomic";
  }
  return "unknown";
}

SpectrumClass parse_spectrum_class(std::string_view name) {
  if (name == "harmonic") return SpectrumClass::Harmonic;
  if (name == "atomic") return SpectrumClass::Atomic;
  throw std::invalid_argument("unknown spectrum class '" + std::string(name) +
                              "'");
}

Spectrum Spectrum::harmonic(int levels, double omega) {
  check_spectrum_args(levels, omega);
  std::vector<double> freq(static_cast<std::size_t>(levels));
  for (int n = 1; n <= levels; ++n) {
    freq[static_cast<std::size_t>(n - 1)] = n * omega;
  }
  return Spectrum(SpectrumClass::Harmonic, omega, std::move(freq));
}

Spectrum Spectrum::atomic(int levels, double omega) {
  check_spectrum_args(levels, omega);
  std::vector<double> freq(static_cast<std::size_t>(levels));
  for (int n = 1; n <= levels; ++n) {
    const double n2 = static_cast<double>(n) * n;
    freq[static_cast<std::size_t>(n - 1)] = -omega / n2;
  }
  return Spectrum(SpectrumClass::Atomic, omega, std::move(freq));
}

Spectrum Spectrum::make(SpectrumClass kind, int levels, double omega) {
  return kind == SpectrumClass::Harmonic ? harmonic(levels, omega)
                                         : atomic(levels, omega);
}

BigInt lcm_of_squares(int n) {
  if (n < 1) {
    throw std::invalid_argument("lcm_of_squares needs n >= 1");
  }
  BigInt acc = 1;
  for (int k = 2; k <= n; ++k) {
    const BigInt sq = BigInt(k) * k;
    acc = acc / boost::integer::gcd(acc, sq) * sq;
  }
  return acc;
}

TimeWindow search_window(const Spectrum& spectrum, const SearchCap& cap) {
  constexpr double pi = std::numbers::pi;
  const double omega = spectrum.omega();
  if (spectrum.kind() == SpectrumClass::Harmonic) {
    return {0.0, 2.0 * pi / omega, false};
  }

  if (!(cap.multiplier > 0.0)) {
    throw std::invalid_argument("search cap multiplier must be positive");
  }
  const double n = static_cast<double>(spectrum.dimension());
  const double capped_periods = cap.multiplier * n * n * n;
  // Converting to double saturates to +inf for astronomically large values,
  // which still compares correctly against the cap.
  const double full_periods =
      static_cast<double>(lcm_of_squares(static_cast<int>(spectrum.dimension())));
  if (full_periods <= capped_periods) {
    return {0.0, full_periods * pi / omega, false};
  }
  return {0.0, capped_periods * pi / omega, true};
}

}  // namespace qdist

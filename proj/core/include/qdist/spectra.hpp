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
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qdist {

/// Arbitrary-precision integer used for recurrence-period arithmetic.
using BigInt = boost::multiprecision::cpp_int;

enum class SpectrumClass { Harmonic, Atomic };

std::string_view to_string(SpectrumClass kind);

/// Parses "harmonic" or "atomic" (case-sensitive). Throws std::invalid_argument.
SpectrumClass parse_spectrum_class(std::string_view name);

/// Angular frequencies of an N-level Hamiltonian in units with hbar = 1.
///
/// Harmonic levels are n*omega, atomic (truncated Bohr) levels are
/// -omega/n^2, for n = 1..N. Both lists are strictly increasing.
class Spectrum {
 public:
  static Spectrum harmonic(int levels, double omega);
  static Spectrum atomic(int levels, double omega);
  static Spectrum make(SpectrumClass kind, int levels, double omega);

  SpectrumClass kind() const noexcept { return kind_; }
  double omega() const noexcept { return omega_; }
  std::size_t dimension() const noexcept { return frequencies_.size(); }
  std::span<const double> frequencies() const noexcept { return frequencies_; }
  double operator[](std::size_t n) const { return frequencies_[n]; }

  /// Lowest level; frequencies are sorted so this is the first entry.
  double ground() const noexcept { return frequencies_.front(); }

 private:
  Spectrum(SpectrumClass kind, double omega, std::vector<double> frequencies)
      : kind_(kind), omega_(omega), frequencies_(std::move(frequencies)) {}

  SpectrumClass kind_;
  double omega_;
  std::vector<double> frequencies_;
};

inline Spectrum harmonic_spectrum(int levels, double omega) {
  return Spectrum::harmonic(levels, omega);
}
inline Spectrum atomic_spectrum(int levels, double omega) {
  return Spectrum::atomic(levels, omega);
}

/// Time interval scanned for the maximum of the distinguishability.
struct TimeWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
  /// Set when the window was capped below the full recurrence period.
  bool truncated = false;

  double length() const noexcept { return t_hi - t_lo; }
  bool valid() const noexcept { return t_lo >= 0.0 && t_lo < t_hi; }
};

/// Cap applied to atomic search windows: at most multiplier * N^3 * pi/omega.
struct SearchCap {
  double multiplier = 10.0;
};

/// Exact lcm(1^2, 2^2, ..., N^2) by an iterated gcd chain.
BigInt lcm_of_squares(int n);

/// Harmonic: one full period [0, 2pi/omega].
/// Atomic: [0, min(lcm_of_squares(N), K*N^3) * pi/omega], truncated when the
/// cap binds.
TimeWindow search_window(const Spectrum& spectrum, const SearchCap& cap = {});

}  // namespace qdist

#pragma once

#include <random>

#include "atomgrape/dynamics.hpp"
#include "atomgrape/pulse.hpp"
#include "atomgrape/units.hpp"

namespace testing {

inline constexpr double kRabi = atomgrape::kTwoPi * 200e3;

inline double max_abs_diff(const atomgrape::Propagator2& a, const atomgrape::Propagator2& b) {
  return std::max({std::abs(a.u11 - b.u11), std::abs(a.u12 - b.u12), std::abs(a.u21 - b.u21),
                   std::abs(a.u22 - b.u22)});
}

// Piecewise-constant pulse with uniform random phases and amplitudes in
// [0.5, 1.5] x rabi.
inline atomgrape::PulseWaveform random_pulse(std::mt19937_64& rng, std::size_t n, double rabi,
                                             double slice, bool vary_amplitude = true) {
  std::uniform_real_distribution<double> phase(-atomgrape::kPi, atomgrape::kPi);
  std::uniform_real_distribution<double> amp(0.5, 1.5);
  atomgrape::PulseWaveform p;
  p.nominal_rabi = rabi;
  for (std::size_t k = 0; k < n; ++k) {
    p.segments.push_back({slice, vary_amplitude ? amp(rng) * rabi : rabi, phase(rng)});
  }
  return p;
}

}  // namespace testing

#pragma once

// Batched propagation of one waveform through many independent lanes, each
// lane being an atom with its own detuning and coupling scale. The scalar
// kernel is the reference; vector variants must agree with it to rounding.

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "atomgrape/pulse.hpp"

namespace atomgrape::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// Best variant the running CPU supports. ATOMGRAPE_ISA=scalar in the
// environment forces the reference path.
Isa detected_isa();
bool isa_available(Isa isa);

// Structure-of-arrays view of a waveform.
struct SegmentTable {
  std::vector<double> duration;
  std::vector<double> rabi;
  std::vector<double> cos_phase;
  std::vector<double> sin_phase;

  static SegmentTable from(const PulseWaveform& pulse);
  std::size_t size() const { return duration.size(); }
};

// Writes the C and S elements of the full-pulse propagator for every lane.
// All spans must have the same length.
void propagate_lanes(Isa isa, const SegmentTable& segments, std::span<const double> detuning,
                     std::span<const double> coupling_scale, std::span<std::complex<double>> c_out,
                     std::span<std::complex<double>> s_out);

inline void propagate_lanes(const SegmentTable& segments, std::span<const double> detuning,
                            std::span<const double> coupling_scale,
                            std::span<std::complex<double>> c_out,
                            std::span<std::complex<double>> s_out) {
  propagate_lanes(detected_isa(), segments, detuning, coupling_scale, c_out, s_out);
}

// Elementwise sin and cos; exposed for equivalence testing of the vector math.
void sincos_lanes(Isa isa, std::span<const double> x, std::span<double> sin_out,
                  std::span<double> cos_out);

}  // namespace atomgrape::kernels

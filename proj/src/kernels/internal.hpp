#pragma once

#include <complex>
#include <cstddef>

namespace atomgrape::kernels::detail {

// Raw-pointer entry points shared by the dispatcher and each ISA translation unit.
struct LaneArgs {
  const double* duration;
  const double* rabi;
  const double* cos_phase;
  const double* sin_phase;
  std::size_t n_segments;
  const double* detuning;
  const double* coupling_scale;
  std::complex<double>* c_out;
  std::complex<double>* s_out;
  std::size_t n_lanes;
};

void propagate_lanes_scalar(const LaneArgs& args);
void sincos_scalar(const double* x, double* s, double* c, std::size_t n);

#if defined(ATOMGRAPE_HAVE_AVX2)
void propagate_lanes_avx2(const LaneArgs& args);
void sincos_avx2(const double* x, double* s, double* c, std::size_t n);
#endif

}  // namespace atomgrape::kernels::detail

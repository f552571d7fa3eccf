#include <cmath>
#include <cstdlib>
#include <string>

#include "atomgrape/errors.hpp"
#include "atomgrape/kernels.hpp"
#include "internal.hpp"

namespace atomgrape::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(ATOMGRAPE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  static const Isa isa = [] {
    if (const char* forced = std::getenv("ATOMGRAPE_ISA"); forced && std::string(forced) == "scalar") {
      return Isa::Scalar;
    }
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

SegmentTable SegmentTable::from(const PulseWaveform& pulse) {
  SegmentTable t;
  const auto n = pulse.segments.size();
  t.duration.reserve(n);
  t.rabi.reserve(n);
  t.cos_phase.reserve(n);
  t.sin_phase.reserve(n);
  for (const auto& s : pulse.segments) {
    t.duration.push_back(s.duration);
    t.rabi.push_back(s.rabi);
    t.cos_phase.push_back(std::cos(s.phase));
    t.sin_phase.push_back(std::sin(s.phase));
  }
  return t;
}

void propagate_lanes(Isa isa, const SegmentTable& segments, std::span<const double> detuning,
                     std::span<const double> coupling_scale, std::span<std::complex<double>> c_out,
                     std::span<std::complex<double>> s_out) {
  const std::size_t n = detuning.size();
  if (coupling_scale.size() != n || c_out.size() != n || s_out.size() != n) {
    throw ValidationError("propagate_lanes: lane spans differ in length");
  }
  if (!isa_available(isa)) throw ValidationError("propagate_lanes: ISA not available on this CPU");
  const detail::LaneArgs args{segments.duration.data(), segments.rabi.data(),
                              segments.cos_phase.data(), segments.sin_phase.data(),
                              segments.size(),          detuning.data(),
                              coupling_scale.data(),    c_out.data(),
                              s_out.data(),             n};
  switch (isa) {
    case Isa::Scalar:
      detail::propagate_lanes_scalar(args);
      return;
    case Isa::Avx2:
#if defined(ATOMGRAPE_HAVE_AVX2)
      detail::propagate_lanes_avx2(args);
      return;
#else
      break;
#endif
  }
  throw ValidationError("propagate_lanes: unsupported ISA");
}

void sincos_lanes(Isa isa, std::span<const double> x, std::span<double> sin_out,
                  std::span<double> cos_out) {
  if (sin_out.size() != x.size() || cos_out.size() != x.size()) {
    throw ValidationError("sincos_lanes: span sizes differ");
  }
  if (!isa_available(isa)) throw ValidationError("sincos_lanes: ISA not available on this CPU");
  switch (isa) {
    case Isa::Scalar:
      detail::sincos_scalar(x.data(), sin_out.data(), cos_out.data(), x.size());
      return;
    case Isa::Avx2:
#if defined(ATOMGRAPE_HAVE_AVX2)
      detail::sincos_avx2(x.data(), sin_out.data(), cos_out.data(), x.size());
      return;
#else
      break;
#endif
  }
  throw ValidationError("sincos_lanes: unsupported ISA");
}

}  // namespace atomgrape::kernels

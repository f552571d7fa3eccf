#include "atomgrape/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "atomgrape/errors.hpp"
#include "atomgrape/kernels.hpp"
#include "atomgrape/units.hpp"

namespace atomgrape {

namespace {
constexpr ComplexPair kI{0.0, 1.0};
}

FieldVector FieldVector::from_polar(double rabi, double phase, double detuning) {
  return {rabi * std::cos(phase), rabi * std::sin(phase), detuning};
}

double FieldVector::rabi() const { return std::hypot(omega_x, omega_y); }

double FieldVector::effective() const { return std::sqrt(omega_x * omega_x + omega_y * omega_y + delta * delta); }

Propagator2 Propagator2::from_cs(ComplexPair c, ComplexPair s) {
  return {std::conj(c), -kI * std::conj(s), -kI * s, c};
}

Propagator2 Propagator2::adjoint() const {
  return {std::conj(u11), std::conj(u21), std::conj(u12), std::conj(u22)};
}

Propagator2 Propagator2::operator*(const Propagator2& r) const {
  return {u11 * r.u11 + u12 * r.u21, u11 * r.u12 + u12 * r.u22,
          u21 * r.u11 + u22 * r.u21, u21 * r.u12 + u22 * r.u22};
}

TwoLevelState Propagator2::apply(const TwoLevelState& psi) const {
  return {u11 * psi.c1 + u12 * psi.c2, u21 * psi.c1 + u22 * psi.c2};
}

double Propagator2::unitarity_defect() const {
  const Propagator2 p = adjoint() * (*this);
  return std::max({std::abs(p.u11 - 1.0), std::abs(p.u12), std::abs(p.u21), std::abs(p.u22 - 1.0)});
}

Propagator2 segment_propagator(double rabi, double phase, double detuning, double duration) {
  if (!std::isfinite(rabi) || !std::isfinite(phase) || !std::isfinite(detuning) ||
      !std::isfinite(duration)) {
    throw ValidationError("segment_propagator: non-finite input");
  }
  if (duration < 0.0) throw ValidationError("segment_propagator: negative duration");
  if (rabi < 0.0) throw ValidationError("segment_propagator: negative Rabi frequency");

  const double effective = std::sqrt(rabi * rabi + detuning * detuning);
  if (effective == 0.0) return Propagator2::identity();

  const double half_angle = 0.5 * effective * duration;
  const double sn = std::sin(half_angle);
  const double cs = std::cos(half_angle);
  const ComplexPair c{cs, detuning / effective * sn};
  const ComplexPair s = std::polar(rabi / effective * sn, phase);
  return Propagator2::from_cs(c, s);
}

Propagator2 compose(std::span<const Propagator2> props) {
  if (props.empty()) throw ValidationError("compose: empty propagator list");
  Propagator2 total = props.front();
  for (std::size_t i = 1; i < props.size(); ++i) total = props[i] * total;
  return total;
}

Propagator2 propagate_waveform(const PulseWaveform& pulse, double detuning, double coupling_scale) {
  pulse.validate();
  if (!(coupling_scale >= 0.0)) throw ValidationError("propagate_waveform: coupling scale must be non-negative");
  Propagator2 total;
  for (const auto& s : pulse.segments) {
    total = segment_propagator(coupling_scale * s.rabi, s.phase, detuning, s.duration) * total;
  }
  return total;
}

std::vector<Propagator2> propagate_batch(const PulseWaveform& pulse, std::span<const double> detuning,
                                         std::span<const double> coupling_scale) {
  pulse.validate();
  for (double d : detuning) {
    if (!std::isfinite(d)) throw ValidationError("propagate_batch: non-finite detuning");
  }
  for (double s : coupling_scale) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("propagate_batch: invalid coupling scale");
  }
  const auto table = kernels::SegmentTable::from(pulse);
  std::vector<ComplexPair> c(detuning.size()), s(detuning.size());
  kernels::propagate_lanes(table, detuning, coupling_scale, c, s);
  std::vector<Propagator2> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back(Propagator2::from_cs(c[i], s[i]));
  return out;
}

double excited_population(const Propagator2& u) { return std::norm(u.u21); }

double s_phase(const Propagator2& u) {
  if (std::abs(u.u21) <= kPhaseMagnitudeFloor) {
    throw UndefinedPhaseError("s_phase: |<2|U|1>| too small for a defined phase");
  }
  return wrap_angle(std::arg(kI * u.u21));
}

std::array<double, 3> bloch_vector(const TwoLevelState& state) {
  const ComplexPair coherence = std::conj(state.c1) * state.c2;
  return {2.0 * coherence.real(), 2.0 * coherence.imag(), std::norm(state.c1) - std::norm(state.c2)};
}

double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

std::vector<double> unwrap_from(std::span<const double> wrapped, std::size_t seed) {
  std::vector<double> out(wrapped.begin(), wrapped.end());
  if (out.empty()) return out;
  seed = std::min(seed, out.size() - 1);
  for (std::size_t i = seed + 1; i < out.size(); ++i) {
    out[i] = out[i - 1] + wrap_angle(wrapped[i] - out[i - 1]);
  }
  for (std::size_t i = seed; i-- > 0;) {
    out[i] = out[i + 1] + wrap_angle(wrapped[i] - out[i + 1]);
  }
  return out;
}

}  // namespace atomgrape

#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "atomgrape/pulse.hpp"

namespace atomgrape {

using ComplexPair = std::complex<double>;

// Amplitudes of |1> (ground) and |2> (excited).
struct TwoLevelState {
  ComplexPair c1{1.0, 0.0};
  ComplexPair c2{0.0, 0.0};

  static TwoLevelState ground() { return {}; }
  static TwoLevelState excited() { return {{0.0, 0.0}, {1.0, 0.0}}; }
};

// Rotation axis of the rotating-frame Hamiltonian, rad/s.
struct FieldVector {
  double omega_x = 0.0;
  double omega_y = 0.0;
  double delta = 0.0;

  static FieldVector from_polar(double rabi, double phase, double detuning);
  double rabi() const;
  // Generalized Rabi frequency sqrt(rabi^2 + delta^2).
  double effective() const;
};

// 2x2 propagator in the basis (|1>, |2>). For a constant field,
//   U = [[C*, -i S*], [-i S, C]].
class Propagator2 {
 public:
  ComplexPair u11{1.0, 0.0}, u12{0.0, 0.0}, u21{0.0, 0.0}, u22{1.0, 0.0};

  Propagator2() = default;
  Propagator2(ComplexPair a, ComplexPair b, ComplexPair c, ComplexPair d)
      : u11(a), u12(b), u21(c), u22(d) {}

  static Propagator2 identity() { return {}; }
  // Builds the SU(2) form from the C and S elements.
  static Propagator2 from_cs(ComplexPair c, ComplexPair s);

  ComplexPair c() const { return u22; }
  ComplexPair s() const { return ComplexPair{0.0, 1.0} * u21; }

  Propagator2 adjoint() const;
  // (*this) * rhs, i.e. rhs is applied first.
  Propagator2 operator*(const Propagator2& rhs) const;
  TwoLevelState apply(const TwoLevelState& psi) const;

  ComplexPair determinant() const { return u11 * u22 - u12 * u21; }
  // max |(U^dagger U - I)_ij|
  double unitarity_defect() const;
};

Propagator2 segment_propagator(double rabi, double phase, double detuning, double duration);

// Time-ordered product; props[0] acts first.
Propagator2 compose(std::span<const Propagator2> props);

// Full-pulse propagator with every segment amplitude multiplied by
// `coupling_scale`. Closed-form segment products; the reference path.
Propagator2 propagate_waveform(const PulseWaveform& pulse, double detuning, double coupling_scale);

// Same for many (detuning, coupling_scale) lanes at once via the dispatched
// batch kernels.
std::vector<Propagator2> propagate_batch(const PulseWaveform& pulse, std::span<const double> detuning,
                                         std::span<const double> coupling_scale);

// |<2|U|1>|^2
double excited_population(const Propagator2& u);

// arg(i <2|U|1>) = arg S, in (-pi, pi]. Throws UndefinedPhaseError when
// |<2|U|1>| <= 1e-12.
double s_phase(const Propagator2& u);

inline constexpr double kPhaseMagnitudeFloor = 1e-12;

std::array<double, 3> bloch_vector(const TwoLevelState& state);

// Nearest-branch continuation of wrapped phases starting from index `seed`
// and walking outward in both directions.
std::vector<double> unwrap_from(std::span<const double> wrapped, std::size_t seed);

// Maps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace atomgrape

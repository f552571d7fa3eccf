#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "atomgrape/dynamics.hpp"
#include "atomgrape/pulse.hpp"
#include "atomgrape/units.hpp"

namespace atomgrape {

// Ideal inversion for every atom: C = 0, S = 1 regardless of detuning.
struct PerfectMirror {};

using Mirror = std::variant<PulseWaveform, PerfectMirror>;

Propagator2 mirror_propagator(const Mirror& mirror, double detuning, double coupling_scale);

// pi/2 - pi - pi/2 sequence with identical beamsplitters and equal dwell
// times; dwell free evolution is folded into the interferometric phase.
struct MachZehnderConfig {
  PulseWaveform beamsplitter;
  Mirror mirror;
  double interferometric_phase = 0.0;  // rad
};

// P2 = A/2 - (B/2) cos(phi_i + phi_p)
struct FringeDecomposition {
  double offset_a = 0.0;
  double contrast_b = 0.0;
  double pulse_phase = 0.0;  // rad
  // Largest deviation of the sampled fringe from the first-harmonic
  // reconstruction; zero for the closed form.
  double residual = 0.0;
};

// Closed-form output population from the beamsplitter and mirror C, S
// elements: interfering closed paths plus incoherent open paths.
double mz_population_from_cs(ComplexPair c_bs, ComplexPair s_bs, ComplexPair c_m, ComplexPair s_m,
                             double interferometric_phase);

double mz_population(const MachZehnderConfig& config, double detuning, double coupling_scale);

// Independent route: explicit product U_bs D U_m D U_bs with D = diag(1, e^{i theta})
// the dwell evolution, averaged over four equally spaced theta so that only the
// two closed interferometer paths interfere.
double mz_population_direct(const MachZehnderConfig& config, double detuning,
                            double coupling_scale);

// Numeric decomposition from a scan of phi_i over [0, 2pi).
FringeDecomposition fringe_decomposition(const PulseWaveform& beamsplitter, const Mirror& mirror,
                                         double detuning, double coupling_scale,
                                         std::size_t samples = 256);

// Closed-form A, B, phi_p from C, S elements.
FringeDecomposition fringe_from_cs(ComplexPair c_bs, ComplexPair s_bs, ComplexPair c_m,
                                   ComplexPair s_m);

struct ThermalModel {
  double temperature = 20e-6;  // K
  double atom_mass = physics::kRb85Mass;  // kg
  double effective_wavevector = physics::kRb85EffectiveWavevector;  // rad/m
  // Starting Gauss-Hermite order. The order is doubled until two successive
  // contrasts agree within quadrature_tolerance, up to max_quadrature_order.
  // Setting max_quadrature_order equal to quadrature_order fixes the order.
  std::size_t quadrature_order = 64;
  std::size_t max_quadrature_order = 8192;
  double quadrature_tolerance = 1e-10;

  void validate() const;
  // Standard deviation of the Doppler detuning k_eff * v, rad/s.
  double detuning_sigma() const;
};

// Fringe contrast after averaging over a 1D Maxwell-Boltzmann velocity
// distribution: |< B(delta) exp(i phi_p(delta)) >|. Throws NumericalError
// when the refinement does not converge by max_quadrature_order.
double thermal_contrast(const PulseWaveform& beamsplitter, const Mirror& mirror,
                        const ThermalModel& model);

struct NamedMirror {
  std::string name;
  Mirror mirror;
};

struct ContrastRow {
  std::string mirror;
  double temperature = 0.0;  // K
  double contrast = 0.0;
};

inline constexpr const char* kPerfectMirrorName = "perfect_pi";

// Contrast for every (mirror, temperature); a perfect-pi reference row set is
// appended. `model.temperature` is ignored.
std::vector<ContrastRow> contrast_sweep(const PulseWaveform& beamsplitter,
                                        std::span<const NamedMirror> mirrors,
                                        std::span<const double> temperatures,
                                        const ThermalModel& model);

std::string contrast_csv(std::span<const ContrastRow> rows);

}  // namespace atomgrape

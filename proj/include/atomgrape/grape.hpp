#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atomgrape/dynamics.hpp"
#include "atomgrape/ensemble.hpp"
#include "atomgrape/pulse.hpp"

namespace atomgrape {

// PhaseOnly: one phase per slice at fixed amplitude.
// Cartesian: c1 = rabi cos(phase), c2 = rabi sin(phase) per slice, laid out
// channel-major as [c1_0 .. c1_{N-1}, c2_0 .. c2_{N-1}].
enum class ControlParameterization { PhaseOnly, Cartesian };

std::string_view parameterization_name(ControlParameterization p);
ControlParameterization parse_parameterization(std::string_view text);

struct OptimizationConfig {
  ControlParameterization parameterization = ControlParameterization::PhaseOnly;
  std::size_t max_iterations = 200;
  double gradient_tolerance = 1e-6;  // infinity norm
  std::size_t lbfgs_memory = 10;
  double amplitude_cap = 0.0;  // rad/s; 0 disables the amplitude penalty
  double penalty_amplitude_weight = 0.0;
  double penalty_smoothness_weight = 0.0;
  double timestep = 100e-9;  // s

  void validate() const;
};

enum class Termination { Converged, MaxIterations, LineSearchFailure };
std::string_view termination_name(Termination t);

struct OptimizationResult {
  PulseWaveform pulse;
  // Objective (ensemble fidelity minus penalty) at the start and after each
  // accepted step.
  std::vector<double> fidelity_trace;
  // Ensemble fidelity alone at the same points.
  std::vector<double> raw_fidelity_trace;
  double final_gradient_norm = 0.0;
  Termination termination = Termination::MaxIterations;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

// 2x2 complex matrix in row-major order.
using Mat2 = std::array<ComplexPair, 4>;

// exp(A) and its directional derivative in direction B, read off the
// upper-right block of exp([[A, B], [0, A]]) (scaling and squaring).
struct ExpDerivative {
  Mat2 exp;
  Mat2 derivative;
};
ExpDerivative expm_directional(const Mat2& a, const Mat2& b);

// Controls of a uniformly sliced pulse under the given parameterization.
std::vector<double> controls_of(const PulseWaveform& pulse, ControlParameterization p);
// Writes controls back; PhaseOnly keeps the pulse's amplitudes.
PulseWaveform with_controls(const PulseWaveform& pulse, std::span<const double> controls,
                            ControlParameterization p);

struct FidelityAndGradient {
  double fidelity = 0.0;
  std::vector<double> gradient;
};

// Ensemble-weighted fidelity and its exact gradient with respect to the
// controls. Requires uniform slicing.
FidelityAndGradient fidelity_gradient(const PulseWaveform& pulse, const Ensemble& ensemble,
                                      FidelityKind kind, ControlParameterization p);

struct PenaltyValue {
  double value = 0.0;
  std::vector<double> gradient;
};

// w_amp * sum max(0, rabi_k - cap)^2 dt + w_smooth * sum_n sum_k (c^n_{k+1} - c^n_k)^2,
// with c^n the Cartesian controls. Gradient with respect to the chosen parameterization.
PenaltyValue penalty(const PulseWaveform& pulse, const OptimizationConfig& config);

// Phases drawn uniformly from [-pi, pi) with a fixed seed.
PulseWaveform random_phase_pulse(double duration, double rabi, std::size_t n_slices,
                                 std::uint64_t seed);

// Maximizes ensemble fidelity minus penalty with L-BFGS. In PhaseOnly mode
// every slice amplitude is pinned to nominal_rabi.
OptimizationResult optimize(const PulseWaveform& initial, const Ensemble& ensemble,
                            FidelityKind kind, const OptimizationConfig& config);

// JSON mirroring OptimizationConfig field names; amplitude_cap in Hz.
OptimizationConfig config_from_json(std::string_view text);
std::string to_json(const OptimizationConfig& config);

}  // namespace atomgrape

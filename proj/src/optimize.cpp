#include <fmt/format.h>

#include <cmath>

#include "atomgrape/errors.hpp"
#include "atomgrape/grape.hpp"
#include "atomgrape/lbfgs.hpp"
#include "atomgrape/units.hpp"
#include "json_util.hpp"

namespace atomgrape {

void OptimizationConfig::validate() const {
  if (max_iterations == 0) throw ValidationError("max_iterations must be positive");
  if (lbfgs_memory == 0) throw ValidationError("lbfgs_memory must be positive");
  if (!(gradient_tolerance >= 0.0) || !std::isfinite(gradient_tolerance)) {
    throw ValidationError("gradient_tolerance must be non-negative");
  }
  if (!(timestep > 0.0) || !std::isfinite(timestep)) throw ValidationError("timestep must be positive");
  if (!(amplitude_cap >= 0.0) || !(penalty_amplitude_weight >= 0.0) ||
      !(penalty_smoothness_weight >= 0.0)) {
    throw ValidationError("penalty weights and amplitude cap must be non-negative");
  }
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "converged";
    case Termination::MaxIterations:
      return "max_iterations";
    case Termination::LineSearchFailure:
      return "line_search_failure";
  }
  return "unknown";
}

OptimizationResult optimize(const PulseWaveform& initial, const Ensemble& ensemble,
                            FidelityKind kind, const OptimizationConfig& config) {
  config.validate();
  ensemble.validate();
  initial.validate();

  PulseWaveform pulse = discretize(initial, config.timestep);
  if (uniform_slice_duration(pulse) == 0.0) {
    throw ValidationError("initial pulse does not slice uniformly at the configured timestep");
  }
  const auto param = config.parameterization;
  if (param == ControlParameterization::PhaseOnly) {
    for (auto& s : pulse.segments) s.rabi = pulse.nominal_rabi;
  }

  const Objective objective = [&](std::span<const double> x, std::span<double> grad) {
    const PulseWaveform trial = with_controls(pulse, x, param);
    const auto fid = fidelity_gradient(trial, ensemble, kind, param);
    const auto pen = penalty(trial, config);
    const double value = -(fid.fidelity - pen.value);
    if (!std::isfinite(value)) {
      throw NumericalError(fmt::format("objective became {} (fidelity {}, penalty {})", value,
                                       fid.fidelity, pen.value));
    }
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = -(fid.gradient[i] - pen.gradient[i]);
    return value;
  };

  OptimizationResult result;
  std::vector<double> x = controls_of(pulse, param);
  {
    const auto start = with_controls(pulse, x, param);
    const double fid = ensemble_fidelity(start, ensemble, kind);
    result.raw_fidelity_trace.push_back(fid);
    result.fidelity_trace.push_back(fid - penalty(start, config).value);
  }

  LbfgsOptions options;
  options.memory = config.lbfgs_memory;
  options.max_iterations = config.max_iterations;
  options.gradient_tolerance = config.gradient_tolerance;

  const auto report = minimize_lbfgs(objective, x, options,
                                     [&](std::size_t, double value, std::span<const double> xk) {
                                       result.fidelity_trace.push_back(-value);
                                       result.raw_fidelity_trace.push_back(
                                           ensemble_fidelity(with_controls(pulse, xk, param), ensemble, kind));
                                     });

  result.pulse = with_controls(pulse, x, param);
  result.final_gradient_norm = report.gradient_norm;
  result.iterations = report.iterations;
  result.evaluations = report.evaluations;
  switch (report.status) {
    case LbfgsStatus::Converged:
      result.termination = Termination::Converged;
      break;
    case LbfgsStatus::MaxIterations:
      result.termination = Termination::MaxIterations;
      break;
    case LbfgsStatus::LineSearchFailure:
      result.termination = Termination::LineSearchFailure;
      break;
  }
  return result;
}

OptimizationConfig config_from_json(std::string_view text) {
  const auto doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("optimization config must be a JSON object", 1);
  OptimizationConfig c;
  auto count = [&](const char* key, std::size_t& out) {
    if (auto it = doc.find(key); it != doc.end()) {
      if (!it->is_number_integer() || it->get<long long>() <= 0) {
        throw ValidationError(std::string(key) + " must be a positive integer");
      }
      out = it->get<std::size_t>();
    }
  };
  auto real = [&](const char* key, double& out) {
    if (auto it = doc.find(key); it != doc.end()) {
      if (!it->is_number()) throw ValidationError(std::string(key) + " must be a number");
      out = it->get<double>();
    }
  };
  if (auto it = doc.find("parameterization"); it != doc.end()) {
    if (!it->is_string()) throw ValidationError("parameterization must be a string");
    c.parameterization = parse_parameterization(it->get<std::string>());
  }
  count("max_iterations", c.max_iterations);
  count("lbfgs_memory", c.lbfgs_memory);
  real("gradient_tolerance", c.gradient_tolerance);
  double cap_hz = 0.0;
  real("amplitude_cap", cap_hz);
  c.amplitude_cap = hz_to_angular(cap_hz);
  real("penalty_amplitude_weight", c.penalty_amplitude_weight);
  real("penalty_smoothness_weight", c.penalty_smoothness_weight);
  real("timestep", c.timestep);
  c.validate();
  return c;
}

std::string to_json(const OptimizationConfig& c) {
  return fmt::format(
      "{{\n  \"parameterization\": \"{}\",\n  \"max_iterations\": {},\n  \"gradient_tolerance\": {},\n"
      "  \"lbfgs_memory\": {},\n  \"amplitude_cap\": {},\n  \"penalty_amplitude_weight\": {},\n"
      "  \"penalty_smoothness_weight\": {},\n  \"timestep\": {}\n}}\n",
      parameterization_name(c.parameterization), c.max_iterations, c.gradient_tolerance,
      c.lbfgs_memory, angular_to_hz(c.amplitude_cap), c.penalty_amplitude_weight,
      c.penalty_smoothness_weight, c.timestep);
}

}  // namespace atomgrape

#include "atomgrape/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <fmt/format.h>

#include "atomgrape/errors.hpp"
#include "atomgrape/io.hpp"
#include "atomgrape/quadrature.hpp"

namespace atomgrape {

namespace {

constexpr ComplexPair kI{0.0, 1.0};

Propagator2 phased_mirror(const Propagator2& m, double interferometric_phase) {
  return Propagator2::from_cs(m.c(), m.s() * std::polar(1.0, -0.5 * interferometric_phase));
}

// C, S of the mirror for each detuning lane.
std::vector<Propagator2> mirror_batch(const Mirror& mirror, std::span<const double> detuning,
                                      std::span<const double> scale) {
  if (const auto* pulse = std::get_if<PulseWaveform>(&mirror)) {
    return propagate_batch(*pulse, detuning, scale);
  }
  return std::vector<Propagator2>(detuning.size(), Propagator2::from_cs(0.0, 1.0));
}

}  // namespace

Propagator2 mirror_propagator(const Mirror& mirror, double detuning, double coupling_scale) {
  if (const auto* pulse = std::get_if<PulseWaveform>(&mirror)) {
    return propagate_waveform(*pulse, detuning, coupling_scale);
  }
  return Propagator2::from_cs(0.0, 1.0);
}

double mz_population_from_cs(ComplexPair c_bs, ComplexPair s_bs, ComplexPair c_m, ComplexPair s_m,
                             double interferometric_phase) {
  const double cb2 = std::norm(c_bs);
  const double sb2 = std::norm(s_bs);
  const double sm2 = std::norm(s_m);
  const double cm2 = std::norm(c_m);
  const ComplexPair cross =
      std::polar(1.0, interferometric_phase) * cb2 * s_bs * s_bs * std::conj(s_m) * std::conj(s_m);
  return sb2 * sb2 * sm2 + cb2 * cb2 * sm2 + 2.0 * sb2 * cm2 * cb2 - 2.0 * cross.real();
}

double mz_population(const MachZehnderConfig& config, double detuning, double coupling_scale) {
  const auto bs = propagate_waveform(config.beamsplitter, detuning, coupling_scale);
  const auto m = mirror_propagator(config.mirror, detuning, coupling_scale);
  return mz_population_from_cs(bs.c(), bs.s(), m.c(), m.s(), config.interferometric_phase);
}

double mz_population_direct(const MachZehnderConfig& config, double detuning,
                            double coupling_scale) {
  const auto bs = propagate_waveform(config.beamsplitter, detuning, coupling_scale);
  const auto m = phased_mirror(mirror_propagator(config.mirror, detuning, coupling_scale),
                               config.interferometric_phase);
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double theta = 0.5 * kPi * k;
    Propagator2 dwell;
    dwell.u22 = std::polar(1.0, theta);
    const Propagator2 u = bs * dwell * m * dwell * bs;
    total += std::norm(u.u21);
  }
  return 0.25 * total;
}

FringeDecomposition fringe_from_cs(ComplexPair c_bs, ComplexPair s_bs, ComplexPair c_m,
                                   ComplexPair s_m) {
  const double cb2 = std::norm(c_bs);
  const double sb2 = std::norm(s_bs);
  const double sm2 = std::norm(s_m);
  const double cm2 = std::norm(c_m);
  FringeDecomposition f;
  f.offset_a = 2.0 * (sb2 * sb2 * sm2 + cb2 * cb2 * sm2 + 2.0 * sb2 * cm2 * cb2);
  f.contrast_b = 4.0 * cb2 * sb2 * sm2;
  f.pulse_phase = wrap_angle(2.0 * std::arg(s_bs) - 2.0 * std::arg(s_m));
  return f;
}

FringeDecomposition fringe_decomposition(const PulseWaveform& beamsplitter, const Mirror& mirror,
                                         double detuning, double coupling_scale,
                                         std::size_t samples) {
  if (samples < 3) throw ValidationError("fringe_decomposition: need at least 3 phase samples");
  const auto bs = propagate_waveform(beamsplitter, detuning, coupling_scale);
  const auto m = mirror_propagator(mirror, detuning, coupling_scale);
  const double n = static_cast<double>(samples);
  std::vector<double> pop(samples);
  double mean = 0.0;
  ComplexPair coef{0.0, 0.0};
  for (std::size_t j = 0; j < samples; ++j) {
    const double phi = kTwoPi * static_cast<double>(j) / n;
    pop[j] = mz_population_from_cs(bs.c(), bs.s(), m.c(), m.s(), phi);
    mean += pop[j];
    coef += pop[j] * std::polar(1.0, -phi);
  }
  mean /= n;
  coef *= 2.0 / n;
  FringeDecomposition f;
  f.offset_a = 2.0 * mean;
  f.contrast_b = 2.0 * std::abs(coef);
  f.pulse_phase = std::arg(-coef);
  for (std::size_t j = 0; j < samples; ++j) {
    const double phi = kTwoPi * static_cast<double>(j) / n;
    const double fit = 0.5 * f.offset_a - 0.5 * f.contrast_b * std::cos(phi + f.pulse_phase);
    f.residual = std::max(f.residual, std::abs(pop[j] - fit));
  }
  return f;
}

void ThermalModel::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("thermal model: temperature must be non-negative");
  }
  if (!(atom_mass > 0.0) || !std::isfinite(atom_mass)) {
    throw ValidationError("thermal model: atom mass must be positive");
  }
  if (!(effective_wavevector > 0.0) || !std::isfinite(effective_wavevector)) {
    throw ValidationError("thermal model: effective wavevector must be positive");
  }
  if (max_quadrature_order < quadrature_order) {
    throw ValidationError("thermal model: max quadrature order below starting order");
  }
  if (!(quadrature_tolerance > 0.0)) {
    throw ValidationError("thermal model: quadrature tolerance must be positive");
  }
  if (quadrature_order < 8) {
    throw ValidationError(
        fmt::format("thermal model: quadrature order {} below minimum 8", quadrature_order));
  }
}

double ThermalModel::detuning_sigma() const {
  return effective_wavevector * std::sqrt(physics::kBoltzmann * temperature / atom_mass);
}

namespace {

const QuadratureRule& cached_rule(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_hermite(order)).first;
  return it->second;
}

ComplexPair thermal_sum(const PulseWaveform& beamsplitter, const Mirror& mirror, double sigma,
                        std::size_t order) {
  const auto& rule = cached_rule(order);
  const std::size_t n = rule.nodes.size();
  std::vector<double> detuning(n), scale(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) detuning[i] = std::sqrt(2.0) * sigma * rule.nodes[i];
  const auto bs = propagate_batch(beamsplitter, detuning, scale);
  const auto m = mirror_batch(mirror, detuning, scale);
  ComplexPair sum{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = fringe_from_cs(bs[i].c(), bs[i].s(), m[i].c(), m[i].s());
    sum += rule.weights[i] * f.contrast_b * std::polar(1.0, f.pulse_phase);
  }
  return sum / std::sqrt(kPi);
}

}  // namespace

double thermal_contrast(const PulseWaveform& beamsplitter, const Mirror& mirror,
                        const ThermalModel& model) {
  model.validate();
  const double sigma = model.detuning_sigma();
  std::size_t order = model.quadrature_order;
  ComplexPair value = thermal_sum(beamsplitter, mirror, sigma, order);
  while (order < model.max_quadrature_order) {
    const std::size_t next = std::min(2 * order, model.max_quadrature_order);
    const ComplexPair refined = thermal_sum(beamsplitter, mirror, sigma, next);
    const double change = std::abs(refined - value);
    value = refined;
    order = next;
    if (change <= model.quadrature_tolerance) return std::abs(value);
  }
  if (model.max_quadrature_order > model.quadrature_order) {
    throw NumericalError(fmt::format(
        "thermal contrast: quadrature not converged at order {} (T = {} K)", order, model.temperature));
  }
  return std::abs(value);
}

std::vector<ContrastRow> contrast_sweep(const PulseWaveform& beamsplitter,
                                        std::span<const NamedMirror> mirrors,
                                        std::span<const double> temperatures,
                                        const ThermalModel& model) {
  std::vector<ContrastRow> rows;
  auto run = [&](const std::string& name, const Mirror& mirror) {
    for (double t : temperatures) {
      ThermalModel m = model;
      m.temperature = t;
      rows.push_back({name, t, thermal_contrast(beamsplitter, mirror, m)});
    }
  };
  for (const auto& m : mirrors) run(m.name, m.mirror);
  run(kPerfectMirrorName, PerfectMirror{});
  return rows;
}

std::string contrast_csv(std::span<const ContrastRow> rows) {
  std::string out = "mirror,temperature_uK,contrast\n";
  for (const auto& r : rows) {
    out += io::csv_field(r.mirror) + "," + io::csv_number(r.temperature * 1e6) + "," +
           io::csv_number(r.contrast) + "\n";
  }
  return out;
}

}  // namespace atomgrape

// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fmt/format.h>
#include <random>
#include <string>
#include <vector>

#include "atomgrape/analysis.hpp"
#include "atomgrape/ensemble.hpp"
#include "atomgrape/grape.hpp"
#include "atomgrape/interferometer.hpp"
#include "atomgrape/raman.hpp"
#include "atomgrape/units.hpp"

using namespace atomgrape;

namespace {

constexpr double kRabi = kTwoPi * 200e3;
constexpr double kRamanRabi = kTwoPi * 360e3;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int failures = 0;

void verdict(int id, bool ok, const std::string& title, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& text) {
  std::printf("       %s\n", text.c_str());
  std::fflush(stdout);
}

PulseWaveform fig1_pulse(std::size_t iterations, OptimizationResult& result) {
  const auto ensemble = build_ensemble(20, 1.5, 5, 0.1, 8, kRabi);
  OptimizationConfig config;
  config.max_iterations = iterations;
  config.timestep = 100e-9;
  result = optimize(flat_pulse(20e-6, kRabi, 200), ensemble, FidelityKind::RealOverlap, config);
  return result.pulse;
}

double min_population(const PulseWaveform& p, double half_range) {
  const auto curve = response_curve(p, half_range * p.nominal_rabi, 3001);
  double m = 1.0;
  for (const auto& q : curve) m = std::min(m, q.population);
  return m;
}

void criterion_table() {
  struct Row {
    const char* name;
    double half, ninety, phase;
  };
  const std::vector<Row> published{
      {"rectangular", 1.597, 0.645, 0.0}, {"levitt", 2.637, 2.112, 0.953},
      {"waltz", 2.878, 2.434, 1.974},     {"knill", 2.082, 1.693, 0.528},
      {"corpse", 1.438, 1.004, 2.717},    {"scrofulous", 1.347, 0.334, 0.834},
      {"bb1", 1.685, 1.106, 1.778}};
  Stopwatch clock;
  const auto rows = table_one_report({});
  const double elapsed = clock.seconds();
  bool ok = elapsed < 10.0;
  double worst_width = 0.0, worst_phase = 0.0;
  for (std::size_t i = 0; i < published.size(); ++i) {
    const auto& r = rows[i].report;
    const auto& p = published[i];
    const double dw = std::max(std::abs(r.width_half - p.half), std::abs(r.width_ninety - p.ninety));
    const double dp = std::abs(r.max_phase_variation - p.phase);
    worst_width = std::max(worst_width, dw);
    worst_phase = std::max(worst_phase, dp);
    ok = ok && rows[i].name == p.name && dw <= 0.005 && dp <= 0.01;
    info(fmt::format("{:<12} {:.4f} {:.4f} {:.4f}  (published {:.3f} {:.3f} {:.3f})", rows[i].name, r.width_half,
                     r.width_ninety, r.max_phase_variation, p.half, p.ninety, p.phase));
  }
  verdict(1, ok, "composite robustness table",
          fmt::format("max width error {:.4f} (<= 0.005), max phase error {:.4f} rad (<= 0.01), {:.2f} s (< 10)",
                      worst_width, worst_phase, elapsed));
}

void criteria_grape(PulseWaveform& pulse) {
  Stopwatch clock;
  OptimizationResult result;
  pulse = fig1_pulse(100, result);
  const double elapsed = clock.seconds();
  const double fidelity = result.raw_fidelity_trace.back();
  const auto r = robustness_report(pulse);
  const bool ok = fidelity >= 0.98 && r.width_half >= 4.0 && r.width_ninety >= 3.2 &&
                  r.max_phase_variation <= 0.35 && elapsed < 300.0;
  verdict(2, ok, "GRAPE mirror (100 iterations)",
          fmt::format("F {:.4f} (>= 0.98), width>0.5 {:.3f} (>= 4.0), width>0.9 {:.3f} (>= 3.2), "
                      "max dphi {:.3f} rad (<= 0.35), {:.1f} s (< 300)",
                      fidelity, r.width_half, r.width_ninety, r.max_phase_variation, elapsed));

  const double floor = min_population(pulse, 1.5);
  verdict(3, floor >= 0.97, "response floor", fmt::format("min P over |delta| <= 1.5 Omega = {:.4f} (>= 0.97)", floor));

  OptimizationResult longer;
  const auto p200 = fig1_pulse(200, longer);
  const auto r200 = robustness_report(p200);
  info(fmt::format("continued to 200 iterations: F {:.4f}, widths {:.3f} / {:.3f}, dphi {:.3f}, min P {:.4f}",
                   longer.raw_fidelity_trace.back(), r200.width_half, r200.width_ninety,
                   r200.max_phase_variation, min_population(p200, 1.5)));
}

void criterion_thermal(const PulseWaveform& grape) {
  Stopwatch clock;
  const auto bs = rectangular(0.5 * kPi, 0.0, kRabi);
  const std::vector<NamedMirror> mirrors{{"rectangular", rectangular(kPi, 0.0, kRabi)}, {"grape", grape}};
  const std::vector<double> temps{0.1e-6, 1e-6, 10e-6, 20e-6, 50e-6, 100e-6, 300e-6, 1000e-6};
  const auto rows = contrast_sweep(bs, mirrors, temps, ThermalModel{});
  const double elapsed = clock.seconds();
  const std::size_t n = temps.size();
  const double rect20 = rows[3].contrast;
  const double ratio100 = rows[n + 5].contrast / rows[5].contrast;
  bool bounded = true;
  for (std::size_t i = 0; i < n; ++i) {
    bounded = bounded && rows[n + i].contrast <= rows[2 * n + i].contrast + 1e-12;
    info(fmt::format("T {:7.1f} uK  rect {:.4f}  grape {:.4f}  perfect {:.4f}", temps[i] * 1e6, rows[i].contrast,
                     rows[n + i].contrast, rows[2 * n + i].contrast));
  }
  const bool ok = std::abs(rect20 - 0.80) <= 0.05 && ratio100 >= 1.5 && bounded && elapsed < 60.0;
  verdict(4, ok, "thermal fringe contrast",
          fmt::format("rect at 20 uK {:.4f} (0.80 +- 0.05), GRAPE/rect at 100 uK {:.3f} (>= 1.5), "
                      "GRAPE <= perfect at all T: {}, {:.2f} s (< 60)",
                      rect20, ratio100, bounded ? "yes" : "no", elapsed));
}

void criterion_raman(const PulseWaveform& grape) {
  RamanScanConfig config;
  config.nominal_rabi = kRamanRabi;
  config.laser_detuning_grid = linear_grid(-2.0 * kRamanRabi, 2.0 * kRamanRabi, 161);
  config.sublevels = default_sublevel_profile(kRamanRabi);
  config.momentum = gaussian_momentum(1.5 * kRamanRabi);
  auto peak = [&](const PulseWaveform& p) { return peak_population(raman_scan(p, config)).value; };
  const double rect = peak(rectangular(kPi, 0.0, kRamanRabi));
  const double waltz = peak(composite("waltz", kRamanRabi));
  const double g = peak(rescale_rabi(grape, kRamanRabi));
  const double ratio = g / rect;
  const bool ok = g >= waltz && waltz >= rect && ratio >= 1.5 && ratio <= 2.5;
  verdict(5, ok, "Raman scan ordering",
          fmt::format("peaks GRAPE {:.4f} >= WALTZ {:.4f} >= rect {:.4f}; GRAPE/rect {:.3f} (in [1.5, 2.5]), "
                      "GRAPE/WALTZ {:.3f}",
                      g, waltz, rect, ratio, g / waltz));
}

double gradient_check() {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> phase(-kPi, kPi), amp(0.5, 1.5);
  const Ensemble members{{{0.0, 1.0, 0.5}, {0.6, 0.9, 0.3}, {-1.1, 1.15, 0.2}}};
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 8 + static_cast<std::size_t>(trial) * 24 / 9;
    PulseWaveform p;
    p.nominal_rabi = 1.0;
    for (std::size_t k = 0; k < n; ++k) p.segments.push_back({4.0 * kPi / n, amp(rng), phase(rng)});
    for (auto param : {ControlParameterization::PhaseOnly, ControlParameterization::Cartesian}) {
      for (auto kind : {FidelityKind::RealOverlap, FidelityKind::ImagOverlap, FidelityKind::SquareOverlap}) {
        const auto g = fidelity_gradient(p, members, kind, param).gradient;
        auto x = controls_of(p, param);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double keep = x[i];
          x[i] = keep + 1e-7;
          const double up = ensemble_fidelity(with_controls(p, x, param), members, kind);
          x[i] = keep - 1e-7;
          const double down = ensemble_fidelity(with_controls(p, x, param), members, kind);
          x[i] = keep;
          const double fd = (up - down) / 2e-7;
          diff = std::max(diff, std::abs(fd - g[i]));
          scale = std::max(scale, std::abs(fd));
        }
        worst = std::max(worst, diff / scale);
      }
    }
  }
  return worst;
}

void criterion_properties(const PulseWaveform& grape) {
  const double grad = gradient_check();

  // unitarity of every propagator produced by the robustness and contour sweeps
  double unitarity = 0.0;
  std::vector<PulseWaveform> pulses{grape};
  for (const auto& spec : composite_catalog()) pulses.push_back(from_composite_spec(spec, kRabi));
  for (const auto& p : pulses) {
    std::vector<double> d, s;
    for (int i = -6000; i <= 6000; ++i) {
      d.push_back(1e-3 * i * kRabi);
      s.push_back(1.0);
    }
    for (int i = 0; i < 41; ++i) {
      for (int j = 0; j < 41; ++j) {
        d.push_back((-3.0 + 0.15 * j) * kRabi);
        s.push_back(0.5 + 0.025 * i);
      }
    }
    for (const auto& u : propagate_batch(p, d, s)) unitarity = std::max(unitarity, u.unitarity_defect());
  }

  double eq_direct = 0.0;
  const auto bs = rectangular(0.5 * kPi, 0.0, kRabi);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const MachZehnderConfig c{bs, grape, 0.31 * (i - j)};
      const double d = (-2.0 + 4.0 * i / 19.0) * kRabi, sc = 0.6 + 0.8 * j / 19.0;
      eq_direct = std::max(eq_direct, std::abs(mz_population(c, d, sc) - mz_population_direct(c, d, sc)));
    }
  }

  double square = 0.0;
  const auto ensemble = build_ensemble(20, 1.5, 5, 0.1, 8, kRabi);
  for (const auto& m : ensemble.members) {
    const double re = member_fidelity(grape, m, FidelityKind::RealOverlap);
    const double im = member_fidelity(grape, m, FidelityKind::ImagOverlap);
    square = std::max(square, std::abs(member_fidelity(grape, m, FidelityKind::SquareOverlap) - (re * re + im * im)));
  }

  double quadrature = 0.0;
  double fixed_order = 0.0;
  for (double t : {0.1e-6, 1e-6, 10e-6, 20e-6, 50e-6, 100e-6, 300e-6, 1000e-6}) {
    for (const Mirror& m : {Mirror{rectangular(kPi, 0.0, kRabi)}, Mirror{grape}, Mirror{PerfectMirror{}}}) {
      ThermalModel a, b;
      a.temperature = b.temperature = t;
      b.quadrature_order = 2 * a.quadrature_order;
      quadrature = std::max(quadrature, std::abs(thermal_contrast(bs, m, a) - thermal_contrast(bs, m, b)));
      if (t <= 100e-6) {
        a.max_quadrature_order = a.quadrature_order;
        b.max_quadrature_order = b.quadrature_order;
        fixed_order = std::max(fixed_order, std::abs(thermal_contrast(bs, m, a) - thermal_contrast(bs, m, b)));
      }
    }
  }
  info(fmt::format("fixed order 64 vs 128 up to 100 uK: {:.2e}", fixed_order));

  double grid = 0.0;
  RobustnessOptions fine;
  fine.step = 5e-4;
  for (const auto& spec : composite_catalog()) {
    const auto p = from_composite_spec(spec, kRabi);
    const auto a = robustness_report(p), b = robustness_report(p, fine);
    grid = std::max({grid, std::abs(a.width_half - b.width_half), std::abs(a.width_ninety - b.width_ninety)});
  }

  const bool ok = grad < 1e-6 && unitarity < 1e-12 && eq_direct < 1e-12 && square < 1e-12 &&
                  quadrature < 1e-6 && grid < 0.002;
  verdict(6, ok, "property suite",
          fmt::format("gradient rel err {:.2e} (< 1e-6), unitarity {:.2e} (< 1e-12), closed form vs direct "
                      "{:.2e} (< 1e-12), F_sq identity {:.2e}, quadrature doubling {:.2e} (< 1e-6), "
                      "grid convergence {:.2e} (< 0.002)",
                      grad, unitarity, eq_direct, square, quadrature, grid));
}

}  // namespace

int main() {
  criterion_table();
  PulseWaveform grape;
  criteria_grape(grape);
  criterion_thermal(grape);
  criterion_raman(grape);
  criterion_properties(grape);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

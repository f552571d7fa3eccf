#include "atomgrape/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "atomgrape/dynamics.hpp"
#include "atomgrape/errors.hpp"
#include "atomgrape/io.hpp"
#include "atomgrape/units.hpp"

namespace atomgrape {

namespace {

// Root of the parabola through (xq,yq), (xp,yp), (xr,yr) equal to `level`
// between xq (at or below) and xp (above). Falls back to the chord.
double refine_crossing(double xq, double yq, double xp, double yp, const double* xr,
                       const double* yr, double level) {
  const double linear = xq + (level - yq) * (xp - xq) / (yp - yq);
  if (xr == nullptr) return linear;
  const double d1 = (yp - yq) / (xp - xq);
  const double d2 = ((*yr - yp) / (*xr - xp) - d1) / (*xr - xq);
  // p(u) = yq + d1 u + d2 u (u - h), u = x - xq, h = xp - xq
  const double h = xp - xq;
  const double a = d2;
  const double b = d1 - d2 * h;
  const double c = yq - level;
  if (std::abs(a) * h * h < 1e-14 * (std::abs(b) * h + std::abs(c) + 1e-300)) return linear;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return linear;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double lo = std::min(0.0, h), hi = std::max(0.0, h);
  for (double u : {q / a, q != 0.0 ? c / q : 0.0}) {
    if (std::isfinite(u) && u >= lo && u <= hi) return xq + u;
  }
  return linear;
}

struct PhaseTrace {
  std::vector<double> phase;
  std::vector<bool> interpolated;
};

// Unwraps arg S from `seed`, filling samples with |S| below the flag threshold
// by linear interpolation in the index.
PhaseTrace unwrap_s_phases(std::span<const ComplexPair> s, std::size_t seed) {
  const std::size_t n = s.size();
  PhaseTrace out{std::vector<double>(n, 0.0), std::vector<bool>(n, false)};
  std::vector<std::size_t> valid;
  std::vector<double> wrapped;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(s[i]) < kPhaseFlagThreshold) {
      out.interpolated[i] = true;
    } else {
      valid.push_back(i);
      wrapped.push_back(std::arg(s[i]));
    }
  }
  if (valid.empty()) throw UndefinedPhaseError("S vanishes at every sample; phase undefined");
  std::size_t seed_pos = 0;
  for (std::size_t k = 1; k < valid.size(); ++k) {
    const auto dist = [&](std::size_t i) { return i > seed ? i - seed : seed - i; };
    if (dist(valid[k]) < dist(valid[seed_pos])) seed_pos = k;
  }
  const auto unwrapped = unwrap_from(wrapped, seed_pos);
  for (std::size_t k = 0; k < valid.size(); ++k) out.phase[valid[k]] = unwrapped[k];
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.interpolated[i]) continue;
    while (k < valid.size() && valid[k] < i) ++k;
    if (k == 0) {
      out.phase[i] = unwrapped.front();
    } else if (k == valid.size()) {
      out.phase[i] = unwrapped.back();
    } else {
      const double t = static_cast<double>(i - valid[k - 1]) / static_cast<double>(valid[k] - valid[k - 1]);
      out.phase[i] = unwrapped[k - 1] + t * (unwrapped[k] - unwrapped[k - 1]);
    }
  }
  return out;
}

std::size_t nearest_index(std::span<const double> x, double value) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i] - value) < std::abs(x[best] - value)) best = i;
  }
  return best;
}

std::vector<double> symmetric_grid(double half, std::size_t n) {
  std::vector<double> g(n);
  if (n == 1) return {0.0};
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

}  // namespace

double threshold_width(std::span<const double> x, std::span<const double> y, std::size_t center,
                       double threshold) {
  if (x.size() != y.size()) throw ValidationError("threshold_width: size mismatch");
  if (center >= x.size()) throw ValidationError("threshold_width: center out of range");
  if (!(y[center] > threshold)) return 0.0;
  const std::size_t n = x.size();
  std::size_t r = center;
  while (r + 1 < n && y[r + 1] > threshold) ++r;
  double right = x[r];
  if (r + 1 < n) {
    const bool has = r >= 1;
    right = refine_crossing(x[r + 1], y[r + 1], x[r], y[r], has ? &x[r - 1] : nullptr,
                            has ? &y[r - 1] : nullptr, threshold);
  }
  std::size_t l = center;
  while (l > 0 && y[l - 1] > threshold) --l;
  double left = x[l];
  if (l > 0) {
    const bool has = l + 1 < n;
    left = refine_crossing(x[l - 1], y[l - 1], x[l], y[l], has ? &x[l + 1] : nullptr,
                           has ? &y[l + 1] : nullptr, threshold);
  }
  return right - left;
}

RobustnessReport robustness_report(const PulseWaveform& pulse, const RobustnessOptions& options) {
  pulse.validate();
  if (!(options.step > 0.0) || !(options.half_range > 0.0) || !(options.phase_range >= 0.0) ||
      options.phase_range > options.half_range) {
    throw ValidationError("robustness options: need step > 0 and 0 <= phase_range <= half_range");
  }
  const auto half_steps = static_cast<std::size_t>(std::llround(options.half_range / options.step));
  const std::size_t n = 2 * half_steps + 1;
  std::vector<double> x(n), detuning(n), scale(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (static_cast<double>(i) - static_cast<double>(half_steps)) * options.step;
    detuning[i] = x[i] * pulse.nominal_rabi;
  }
  const auto props = propagate_batch(pulse, detuning, scale);
  std::vector<double> pop(n);
  for (std::size_t i = 0; i < n; ++i) pop[i] = excited_population(props[i]);

  RobustnessReport report;
  report.length_t_pi = pulse.length_in_t_pi();
  report.width_half = threshold_width(x, pop, half_steps, 0.5);
  report.width_ninety = threshold_width(x, pop, half_steps, 0.9);

  const auto phase_steps = static_cast<std::size_t>(std::llround(options.phase_range / options.step));
  std::vector<ComplexPair> s;
  for (std::size_t i = half_steps - phase_steps; i <= half_steps + phase_steps; ++i) {
    s.push_back(props[i].s());
  }
  const auto trace = unwrap_s_phases(s, phase_steps);
  const auto [lo, hi] = std::minmax_element(trace.phase.begin(), trace.phase.end());
  report.max_phase_variation = *hi - *lo;
  return report;
}

std::vector<ResponsePoint> response_curve(const PulseWaveform& pulse, double detuning_range,
                                          std::size_t n_points) {
  if (n_points == 0) throw ValidationError("response_curve: need at least one point");
  if (!(detuning_range >= 0.0) || !std::isfinite(detuning_range)) {
    throw ValidationError("response_curve: range must be non-negative");
  }
  const auto grid = symmetric_grid(detuning_range, n_points);
  const std::vector<double> scale(n_points, 1.0);
  const auto props = propagate_batch(pulse, grid, scale);
  std::vector<ComplexPair> s(n_points);
  for (std::size_t i = 0; i < n_points; ++i) s[i] = props[i].s();
  const auto trace = unwrap_s_phases(s, nearest_index(grid, 0.0));
  std::vector<ResponsePoint> out(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    out[i] = {grid[i], excited_population(props[i]), trace.phase[i], trace.interpolated[i]};
  }
  return out;
}

ContourGrid contour_grid(const PulseWaveform& pulse, double detuning_range, double coupling_range,
                         std::size_t resolution) {
  if (resolution < 2) throw ValidationError("contour_grid: resolution must be at least 2");
  if (!(coupling_range >= 0.0) || coupling_range >= 1.0) {
    throw ValidationError("contour_grid: coupling range must lie in [0, 1)");
  }
  if (!(detuning_range >= 0.0) || !std::isfinite(detuning_range)) {
    throw ValidationError("contour_grid: detuning range must be non-negative");
  }
  ContourGrid g;
  g.detuning_axis = symmetric_grid(detuning_range, resolution);
  g.coupling_axis = symmetric_grid(coupling_range, resolution);
  for (auto& c : g.coupling_axis) c += 1.0;
  g.contour_levels = kContourLevels;
  std::vector<double> detuning, scale;
  for (double c : g.coupling_axis) {
    for (double d : g.detuning_axis) {
      detuning.push_back(d);
      scale.push_back(c);
    }
  }
  const auto props = propagate_batch(pulse, detuning, scale);
  g.populations.reserve(props.size());
  for (const auto& u : props) g.populations.push_back(excited_population(u));
  return g;
}

std::vector<TableRow> table_one_report(std::span<const NamedPulse> optimized,
                                       const RobustnessOptions& options) {
  constexpr double kRabi = kTwoPi * 200e3;
  std::vector<TableRow> rows;
  for (const auto& spec : composite_catalog()) {
    rows.push_back({spec.name, spec.description, robustness_report(from_composite_spec(spec, kRabi), options)});
  }
  for (const auto& p : optimized) {
    rows.push_back({p.name, fmt::format("{} slices", p.pulse.segments.size()),
                    robustness_report(p.pulse, options)});
  }
  return rows;
}

std::string table_csv(std::span<const TableRow> rows) {
  std::string out = "pulse,sequence,length_t_pi,width_p_gt_0.5,width_p_gt_0.9,max_phase_variation_rad\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{}\n", io::csv_field(r.name), io::csv_field(r.sequence),
                       io::csv_number(r.report.length_t_pi), io::csv_number(r.report.width_half),
                       io::csv_number(r.report.width_ninety),
                       io::csv_number(r.report.max_phase_variation));
  }
  return out;
}

std::string table_text(std::span<const TableRow> rows) {
  std::string out = fmt::format("{:<12} {:>8} {:>10} {:>10} {:>10}\n", "pulse", "t_pi", "P>0.5",
                                "P>0.9", "dphi(S)");
  for (const auto& r : rows) {
    out += fmt::format("{:<12} {:>8.4f} {:>10.4f} {:>10.4f} {:>10.4f}\n", r.name, r.report.length_t_pi,
                       r.report.width_half, r.report.width_ninety, r.report.max_phase_variation);
  }
  return out;
}

std::string response_csv(std::span<const ResponsePoint> curve, double nominal_rabi) {
  if (!(nominal_rabi > 0.0)) throw ValidationError("response_csv: nominal Rabi must be positive");
  std::string out = "detuning_omega,detuning_hz,population,phase_rad,phase_interpolated\n";
  for (const auto& p : curve) {
    out += fmt::format("{},{},{},{},{}\n", io::csv_number(p.detuning / nominal_rabi),
                       io::csv_number(angular_to_hz(p.detuning)), io::csv_number(p.population),
                       io::csv_number(p.phase), p.phase_interpolated ? 1 : 0);
  }
  return out;
}

std::string contour_csv(const ContourGrid& grid, double nominal_rabi) {
  if (!(nominal_rabi > 0.0)) throw ValidationError("contour_csv: nominal Rabi must be positive");
  std::string out = "detuning_omega,coupling_scale,population\n";
  for (std::size_t i = 0; i < grid.coupling_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.detuning_axis.size(); ++j) {
      out += fmt::format("{},{},{}\n", io::csv_number(grid.detuning_axis[j] / nominal_rabi),
                         io::csv_number(grid.coupling_axis[i]), io::csv_number(grid.at(i, j)));
    }
  }
  return out;
}

}  // namespace atomgrape

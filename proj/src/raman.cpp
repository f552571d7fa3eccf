#include "atomgrape/raman.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>

#include "atomgrape/dynamics.hpp"
#include "atomgrape/errors.hpp"
#include "atomgrape/io.hpp"
#include "atomgrape/units.hpp"
#include "json_util.hpp"

namespace atomgrape {

void SublevelSet::validate() const {
  if (levels.empty()) throw ValidationError("sublevel set is empty");
  double total = 0.0;
  for (const auto& l : levels) {
    if (!(l.coupling_factor > 0.0) || !std::isfinite(l.coupling_factor)) {
      throw ValidationError(fmt::format("sublevel m_F={}: coupling factor must be positive", l.m_f));
    }
    if (!std::isfinite(l.stark_shift)) {
      throw ValidationError(fmt::format("sublevel m_F={}: non-finite light shift", l.m_f));
    }
    if (!(l.population_weight >= 0.0)) {
      throw ValidationError(fmt::format("sublevel m_F={}: negative weight", l.m_f));
    }
    total += l.population_weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError(fmt::format("sublevel weights sum to {}, expected 1", total));
  }
}

SublevelSet default_sublevel_profile(double nominal_rabi) {
  if (!(nominal_rabi > 0.0)) throw ValidationError("nominal Rabi frequency must be positive");
  SublevelSet set;
  for (int m = -2; m <= 2; ++m) {
    set.levels.push_back({m, 1.0 + 0.15 * m, (0.3 + 0.5 * m) * nominal_rabi, 0.2});
  }
  return set;
}

std::vector<MomentumSample> gaussian_momentum(double fwhm, std::size_t points) {
  if (!(fwhm >= 0.0) || !std::isfinite(fwhm)) throw ValidationError("momentum FWHM must be non-negative");
  if (points == 0) throw ValidationError("momentum distribution needs at least one point");
  if (fwhm == 0.0 || points == 1) return {{0.0, 1.0}};
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const auto grid = linear_grid(-3.0 * fwhm, 3.0 * fwhm, points);
  std::vector<MomentumSample> out;
  double total = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double trap = (i == 0 || i + 1 == points) ? 0.5 : 1.0;
    const double w = trap * std::exp(-0.5 * grid[i] * grid[i] / (sigma * sigma));
    out.push_back({grid[i], w});
    total += w;
  }
  for (auto& s : out) s.weight /= total;
  return out;
}

EnsembleMember sublevel_member(const Sublevel& level, double laser_detuning,
                               const MomentumSample& sample) {
  return {laser_detuning - level.stark_shift + sample.detuning, level.coupling_factor,
          level.population_weight * sample.weight};
}

std::vector<ScanPoint> raman_scan(const PulseWaveform& pulse, const RamanScanConfig& config) {
  config.sublevels.validate();
  if (config.momentum.empty()) throw ValidationError("raman scan: empty momentum distribution");
  if (config.laser_detuning_grid.empty()) throw ValidationError("raman scan: empty detuning grid");
  double momentum_total = 0.0;
  for (const auto& s : config.momentum) {
    if (!(s.weight >= 0.0)) throw ValidationError("raman scan: negative momentum weight");
    momentum_total += s.weight;
  }
  if (!(momentum_total > 0.0)) throw ValidationError("raman scan: momentum weights sum to zero");

  const std::size_t per_point = config.sublevels.levels.size() * config.momentum.size();
  const std::size_t lanes = per_point * config.laser_detuning_grid.size();
  std::vector<double> detuning, scale, weight;
  detuning.reserve(lanes);
  scale.reserve(lanes);
  weight.reserve(lanes);
  for (double dl : config.laser_detuning_grid) {
    for (const auto& level : config.sublevels.levels) {
      for (const auto& sample : config.momentum) {
        const auto m = sublevel_member(level, dl, sample);
        detuning.push_back(m.detuning_offset);
        scale.push_back(m.coupling_scale);
        weight.push_back(m.weight / momentum_total);
      }
    }
  }
  const auto props = propagate_batch(pulse, detuning, scale);
  std::vector<ScanPoint> out;
  out.reserve(config.laser_detuning_grid.size());
  for (std::size_t g = 0; g < config.laser_detuning_grid.size(); ++g) {
    double p = 0.0;
    for (std::size_t k = g * per_point; k < (g + 1) * per_point; ++k) {
      p += weight[k] * excited_population(props[k]);
    }
    out.push_back({config.laser_detuning_grid[g], p});
  }
  return out;
}

Peak peak_population(std::span<const ScanPoint> curve) {
  if (curve.empty()) throw ValidationError("peak_population: empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].population > curve[best].population) best = i;
  }
  Peak peak{curve[best].laser_detuning, curve[best].population};
  if (best == 0 || best + 1 == curve.size()) return peak;
  const double x0 = curve[best - 1].laser_detuning, y0 = curve[best - 1].population;
  const double x1 = curve[best].laser_detuning, y1 = curve[best].population;
  const double x2 = curve[best + 1].laser_detuning, y2 = curve[best + 1].population;
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  if (!(curvature < 0.0)) return peak;
  // p(x) = y1 + d12 (x - x1) + curvature (x - x1)(x - x2)
  const double xv = 0.5 * (x1 + x2) - 0.5 * d12 / curvature;
  if (xv < x0 || xv > x2) return peak;
  peak.laser_detuning = xv;
  peak.value = y1 + d12 * (xv - x1) + curvature * (xv - x1) * (xv - x2);
  return peak;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n == 0) throw ValidationError("linear_grid: need at least one point");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("linear_grid: non-finite bounds");
  if (n == 1) return {0.5 * (lo + hi)};
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

SublevelSet sublevels_from_json(std::string_view text) {
  const auto doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("sublevel profile must be a JSON object", 1);
  const auto it = doc.find("levels");
  if (it == doc.end() || !it->is_array()) throw ParseError("missing 'levels' array", 1);
  SublevelSet set;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& l = (*it)[i];
    const std::size_t line = detail::element_line(text, 3, i);
    if (!l.is_object()) throw ParseError(fmt::format("level {} is not an object", i), line);
    const double m = detail::number_field(l, "m_f", line);
    if (m != std::round(m)) throw ParseError("field 'm_f' must be an integer", line);
    set.levels.push_back({static_cast<int>(m), detail::number_field(l, "coupling_factor", line),
                          hz_to_angular(detail::number_field(l, "stark_shift_hz", line)),
                          detail::number_field(l, "weight", line)});
  }
  double total = 0.0;
  for (const auto& l : set.levels) total += l.population_weight;
  if (total > 0.0) {
    for (auto& l : set.levels) l.population_weight /= total;
  }
  set.validate();
  return set;
}

std::string to_json(const SublevelSet& set) {
  std::string out = "{\n  \"levels\": [\n";
  for (std::size_t i = 0; i < set.levels.size(); ++i) {
    const auto& l = set.levels[i];
    out += fmt::format(
        "    {{\"m_f\": {}, \"coupling_factor\": {}, \"stark_shift_hz\": {}, \"weight\": {}}}{}\n",
        l.m_f, io::exact_number(l.coupling_factor), io::exact_number(angular_to_hz_exact(l.stark_shift)),
        io::exact_number(l.population_weight), i + 1 < set.levels.size() ? "," : "");
  }
  out += "  ]\n}\n";
  return out;
}

SublevelSet load_sublevels(const std::filesystem::path& source) {
  return sublevels_from_json(io::read_file(source));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

std::vector<MomentumSample> momentum_from_csv(std::string_view text) {
  std::vector<MomentumSample> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw ParseError("expected two columns", line_no);
    double d = 0.0, w = 0.0;
    const bool ok = parse_double(line.substr(0, comma), d) && parse_double(line.substr(comma + 1), w);
    if (!ok) {
      if (line_no == 1 && out.empty()) continue;  // header
      throw ParseError("malformed number", line_no);
    }
    if (w < 0.0) throw ParseError("negative weight", line_no);
    out.push_back({hz_to_angular(d), w});
  }
  if (out.empty()) throw ValidationError("momentum file has no samples");
  double total = 0.0;
  for (const auto& s : out) total += s.weight;
  if (!(total > 0.0)) throw ValidationError("momentum weights sum to zero");
  for (auto& s : out) s.weight /= total;
  return out;
}

std::vector<MomentumSample> load_momentum(const std::filesystem::path& source) {
  return momentum_from_csv(io::read_file(source));
}

std::string scan_csv(std::span<const ScanPoint> curve) {
  std::string out = "laser_detuning_hz,population\n";
  for (const auto& p : curve) {
    out += io::csv_number(angular_to_hz(p.laser_detuning)) + "," + io::csv_number(p.population) + "\n";
  }
  return out;
}

}  // namespace atomgrape

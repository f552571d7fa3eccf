#include "atomgrape/pulse.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "atomgrape/errors.hpp"
#include "atomgrape/io.hpp"
#include "atomgrape/units.hpp"
#include "json_util.hpp"

namespace atomgrape {

double PulseWaveform::total_duration() const {
  return std::accumulate(segments.begin(), segments.end(), 0.0,
                         [](double acc, const PulseSegment& s) { return acc + s.duration; });
}

double PulseWaveform::t_pi() const { return kPi / nominal_rabi; }

void PulseWaveform::validate() const {
  if (segments.empty()) throw ValidationError("pulse has no segments");
  if (!std::isfinite(nominal_rabi) || nominal_rabi <= 0.0) {
    throw ValidationError("pulse nominal Rabi frequency must be positive and finite");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!std::isfinite(s.duration) || !std::isfinite(s.rabi) || !std::isfinite(s.phase)) {
      throw ValidationError(fmt::format("segment {}: non-finite value", i));
    }
    if (s.duration <= 0.0) throw ValidationError(fmt::format("segment {}: duration must be positive", i));
    if (s.rabi < 0.0) throw ValidationError(fmt::format("segment {}: negative Rabi frequency", i));
  }
}

PulseWaveform rectangular(double angle, double phase, double rabi) {
  if (!(angle > 0.0) || !(rabi > 0.0) || !std::isfinite(angle) || !std::isfinite(rabi) ||
      !std::isfinite(phase)) {
    throw ValidationError("rectangular: angle and Rabi frequency must be positive and finite");
  }
  return {{{angle / rabi, rabi, phase}}, rabi};
}

// Sequences as printed in the usual degree notation theta_phi.
const std::vector<CompositeSpec>& composite_catalog() {
  static const std::vector<CompositeSpec> catalog{
      {"rectangular", "180_0", {{180, 0}}, 1, 1},
      {"levitt", "90_90 180_0 90_90", {{90, 90}, {180, 0}, {90, 90}}, 2, 1},
      {"waltz", "90_0 180_180 270_0", {{90, 0}, {180, 180}, {270, 0}}, 3, 1},
      {"knill",
       "180_240 180_210 180_300 180_210 180_240",
       {{180, 240}, {180, 210}, {180, 300}, {180, 210}, {180, 240}},
       5,
       1},
      {"corpse", "60_0 300_180 420_0", {{60, 0}, {300, 180}, {420, 0}}, 13, 3},
      {"scrofulous", "180_60 180_300 180_60", {{180, 60}, {180, 300}, {180, 60}}, 3, 1},
      // The 360 degree element counts for two t_pi, so BB1 is 5 t_pi long.
      {"bb1",
       "180_104.5 360_313.4 180_104.5 180_0",
       {{180, 104.5}, {360, 313.4}, {180, 104.5}, {180, 0}},
       5,
       1},
  };
  return catalog;
}

const CompositeSpec& find_composite(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const auto& catalog = composite_catalog();
  const auto it = std::find_if(catalog.begin(), catalog.end(),
                               [&](const CompositeSpec& s) { return s.name == key; });
  if (it == catalog.end()) throw NotFoundError("unknown composite pulse '" + std::string(name) + "'");
  return *it;
}

PulseWaveform from_composite_spec(const CompositeSpec& spec, double rabi) {
  if (!(rabi > 0.0) || !std::isfinite(rabi)) throw ValidationError("composite: Rabi frequency must be positive");
  PulseWaveform pulse;
  pulse.nominal_rabi = rabi;
  for (const auto& e : spec.elements) {
    if (!(e.angle_deg > 0.0)) throw ValidationError("composite: element angles must be positive");
    const double angle = e.angle_deg * kPi / 180.0;
    pulse.segments.push_back({angle / rabi, rabi, e.phase_deg * kPi / 180.0});
  }
  return pulse;
}

PulseWaveform composite(std::string_view name, double rabi) {
  return from_composite_spec(find_composite(name), rabi);
}

PulseWaveform discretize(const PulseWaveform& pulse, double timestep) {
  if (!(timestep > 0.0) || !std::isfinite(timestep)) {
    throw ValidationError("discretize: timestep must be positive");
  }
  pulse.validate();
  PulseWaveform out;
  out.nominal_rabi = pulse.nominal_rabi;
  for (const auto& s : pulse.segments) {
    const double ratio = s.duration / timestep;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
    const double slice = s.duration / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out.segments.push_back({slice, s.rabi, s.phase});
  }
  return out;
}

double uniform_slice_duration(const PulseWaveform& pulse) {
  if (pulse.segments.empty()) return 0.0;
  const double first = pulse.segments.front().duration;
  for (const auto& s : pulse.segments) {
    if (std::abs(s.duration - first) > 1e-9 * first) return 0.0;
  }
  return first;
}

PulseWaveform flat_pulse(double duration, double rabi, std::size_t n_slices, double phase) {
  if (!(duration > 0.0) || !(rabi > 0.0) || n_slices == 0) {
    throw ValidationError("flat_pulse: duration, Rabi frequency and slice count must be positive");
  }
  PulseWaveform pulse;
  pulse.nominal_rabi = rabi;
  pulse.segments.assign(n_slices, {duration / static_cast<double>(n_slices), rabi, phase});
  return pulse;
}

PulseWaveform rescale_rabi(const PulseWaveform& pulse, double new_rabi) {
  pulse.validate();
  if (!(new_rabi > 0.0)) throw ValidationError("rescale_rabi: new Rabi frequency must be positive");
  const double factor = new_rabi / pulse.nominal_rabi;
  PulseWaveform out = pulse;
  out.nominal_rabi = new_rabi;
  for (auto& s : out.segments) {
    s.rabi *= factor;
    s.duration /= factor;
  }
  return out;
}

PulseWaveform shift_phase(const PulseWaveform& pulse, double offset) {
  PulseWaveform out = pulse;
  for (auto& s : out.segments) s.phase += offset;
  return out;
}

namespace {

// Hz value plus, when the Hz form does not reproduce the angular value
// bit-exactly, the angular value itself.
std::string rabi_fields(const char* prefix, double w) {
  const double hz = angular_to_hz_exact(w);
  std::string out = fmt::format("\"{}_hz\": {}", prefix, io::exact_number(hz));
  if (hz_to_angular(hz) != w) out += fmt::format(", \"{}_rad_s\": {}", prefix, io::exact_number(w));
  return out;
}

double rabi_value(const nlohmann::json& obj, const std::string& prefix, std::size_t line) {
  const std::string exact = prefix + "_rad_s";
  if (obj.contains(exact)) return detail::number_field(obj, exact.c_str(), line);
  return hz_to_angular(detail::number_field(obj, (prefix + "_hz").c_str(), line));
}

}  // namespace

std::string to_json(const PulseWaveform& pulse) {
  std::string out = "{\n  " + rabi_fields("nominal_rabi", pulse.nominal_rabi) + ",\n  \"segments\": [\n";
  for (std::size_t i = 0; i < pulse.segments.size(); ++i) {
    const auto& s = pulse.segments[i];
    out += fmt::format("    {{\"duration_s\": {}, {}, \"phase_rad\": {}}}{}\n", io::exact_number(s.duration),
                       rabi_fields("rabi", s.rabi), io::exact_number(s.phase),
                       i + 1 < pulse.segments.size() ? "," : "");
  }
  out += "  ]\n}\n";
  return out;
}

PulseWaveform pulse_from_json(std::string_view text) {
  const auto doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("pulse file must be a JSON object", 1);
  PulseWaveform pulse;
  pulse.nominal_rabi = rabi_value(doc, "nominal_rabi", 1);
  const auto it = doc.find("segments");
  if (it == doc.end() || !it->is_array()) throw ParseError("missing 'segments' array", 1);
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& seg = (*it)[i];
    const std::size_t line = detail::element_line(text, 3, i);
    if (!seg.is_object()) throw ParseError(fmt::format("segment {} is not an object", i), line);
    pulse.segments.push_back({detail::number_field(seg, "duration_s", line), rabi_value(seg, "rabi", line),
                              detail::number_field(seg, "phase_rad", line)});
  }
  pulse.validate();
  return pulse;
}

void save(const PulseWaveform& pulse, const std::filesystem::path& destination) {
  pulse.validate();
  io::write_file_atomic(destination, to_json(pulse));
}

PulseWaveform load_pulse(const std::filesystem::path& source) {
  return pulse_from_json(io::read_file(source));
}

}  // namespace atomgrape

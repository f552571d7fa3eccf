#include "atomgrape/ensemble.hpp"

#include <fmt/format.h>

#include <cmath>

#include "atomgrape/errors.hpp"
#include "atomgrape/io.hpp"
#include "atomgrape/units.hpp"
#include "json_util.hpp"

namespace atomgrape {

namespace {

double grid_point(double range, std::size_t n, std::size_t i) {
  if (n == 1) return 0.0;
  return -range + 2.0 * range * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

void Ensemble::validate() const {
  if (members.empty()) throw ValidationError("ensemble has no members");
  double total = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    if (!std::isfinite(m.detuning_offset) || !std::isfinite(m.coupling_scale) ||
        !std::isfinite(m.weight)) {
      throw ValidationError(fmt::format("ensemble member {}: non-finite value", i));
    }
    if (!(m.coupling_scale > 0.0)) {
      throw ValidationError(fmt::format("ensemble member {}: coupling scale must be positive", i));
    }
    if (m.weight < 0.0) throw ValidationError(fmt::format("ensemble member {}: negative weight", i));
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError(fmt::format("ensemble weights sum to {}, expected 1", total));
  }
}

void Ensemble::normalize() {
  double total = 0.0;
  for (const auto& m : members) total += m.weight;
  if (!(total > 0.0)) throw ValidationError("ensemble weights must have a positive sum");
  for (auto& m : members) m.weight /= total;
}

std::string_view fidelity_name(FidelityKind kind) {
  switch (kind) {
    case FidelityKind::RealOverlap:
      return "real";
    case FidelityKind::ImagOverlap:
      return "imag";
    case FidelityKind::SquareOverlap:
      return "square";
  }
  return "unknown";
}

FidelityKind parse_fidelity(std::string_view text) {
  if (text == "real") return FidelityKind::RealOverlap;
  if (text == "imag") return FidelityKind::ImagOverlap;
  if (text == "square") return FidelityKind::SquareOverlap;
  throw ValidationError("unknown fidelity '" + std::string(text) + "' (real|imag|square)");
}

Ensemble build_ensemble(const EnsembleGrid& g) {
  if (g.n_detuning == 0 || g.n_coupling == 0) {
    throw ValidationError("build_ensemble: grid counts must be at least 1");
  }
  if (!(g.detuning_range >= 0.0) || !(g.coupling_range >= 0.0) || !(g.near_resonance_range >= 0.0)) {
    throw ValidationError("build_ensemble: ranges must be non-negative");
  }
  if (g.coupling_range >= 1.0) throw ValidationError("build_ensemble: coupling range must be below 1");

  Ensemble e;
  e.members.reserve(g.n_detuning * g.n_coupling + g.near_resonance_extra);
  for (std::size_t i = 0; i < g.n_detuning; ++i) {
    for (std::size_t j = 0; j < g.n_coupling; ++j) {
      e.members.push_back({grid_point(g.detuning_range, g.n_detuning, i),
                           1.0 + grid_point(g.coupling_range, g.n_coupling, j), 1.0});
    }
  }
  for (std::size_t i = 0; i < g.near_resonance_extra; ++i) {
    e.members.push_back({grid_point(g.near_resonance_range, g.near_resonance_extra, i), 1.0, 1.0});
  }
  const double w = 1.0 / static_cast<double>(e.members.size());
  for (auto& m : e.members) m.weight = w;
  return e;
}

Ensemble build_ensemble(std::size_t n_detuning, double detuning_range_rel, std::size_t n_coupling,
                        double coupling_range, std::size_t near_resonance_extra,
                        double nominal_rabi) {
  return build_ensemble(EnsembleGrid{n_detuning, detuning_range_rel * nominal_rabi, n_coupling,
                                     coupling_range, near_resonance_extra, 0.1 * nominal_rabi});
}

double fidelity_of(const Propagator2& u, FidelityKind kind) {
  switch (kind) {
    case FidelityKind::RealOverlap:
      return u.u21.real();
    case FidelityKind::ImagOverlap:
      return u.u21.imag();
    case FidelityKind::SquareOverlap:
      return std::norm(u.u21);
  }
  return 0.0;
}

std::vector<Propagator2> propagate_members(const PulseWaveform& pulse,
                                           std::span<const EnsembleMember> members) {
  const std::size_t n = members.size();
  std::vector<double> detuning(n), scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    detuning[i] = members[i].detuning_offset;
    scale[i] = members[i].coupling_scale;
  }
  return propagate_batch(pulse, detuning, scale);
}

double member_fidelity(const PulseWaveform& pulse, const EnsembleMember& member, FidelityKind kind) {
  return fidelity_of(propagate_members(pulse, std::span(&member, 1)).front(), kind);
}

double ensemble_fidelity(const PulseWaveform& pulse, const Ensemble& ensemble, FidelityKind kind) {
  const auto props = propagate_members(pulse, ensemble.members);
  double total = 0.0;
  for (std::size_t i = 0; i < props.size(); ++i) {
    total += ensemble.members[i].weight * fidelity_of(props[i], kind);
  }
  return total;
}

std::string to_json(const Ensemble& ensemble) {
  std::string out = "{\n  \"members\": [\n";
  for (std::size_t i = 0; i < ensemble.members.size(); ++i) {
    const auto& m = ensemble.members[i];
    out += fmt::format("    {{\"detuning_hz\": {}, \"coupling_scale\": {}, \"weight\": {}}}{}\n",
                       io::exact_number(angular_to_hz_exact(m.detuning_offset)),
                       io::exact_number(m.coupling_scale), io::exact_number(m.weight),
                       i + 1 < ensemble.members.size() ? "," : "");
  }
  out += "  ]\n}\n";
  return out;
}

Ensemble ensemble_from_json(std::string_view text) {
  const auto doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("ensemble file must be a JSON object", 1);
  const auto it = doc.find("members");
  if (it == doc.end() || !it->is_array()) throw ParseError("missing 'members' array", 1);
  Ensemble e;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& m = (*it)[i];
    const std::size_t line = detail::element_line(text, 3, i);
    if (!m.is_object()) throw ParseError(fmt::format("member {} is not an object", i), line);
    e.members.push_back({hz_to_angular(detail::number_field(m, "detuning_hz", line)),
                         detail::number_field(m, "coupling_scale", line),
                         detail::number_field(m, "weight", line)});
  }
  if (e.members.empty()) throw ValidationError("ensemble has no members");
  // Files may carry unnormalized weights; validate after rescaling.
  e.normalize();
  e.validate();
  return e;
}

Ensemble load_ensemble(const std::filesystem::path& source) {
  return ensemble_from_json(io::read_file(source));
}

void save(const Ensemble& ensemble, const std::filesystem::path& destination) {
  ensemble.validate();
  io::write_file_atomic(destination, to_json(ensemble));
}

}  // namespace atomgrape

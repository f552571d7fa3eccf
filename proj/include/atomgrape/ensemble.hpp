#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atomgrape/dynamics.hpp"
#include "atomgrape/pulse.hpp"

namespace atomgrape {

// One drift Hamiltonian of the robustness ensemble.
struct EnsembleMember {
  double detuning_offset = 0.0;  // rad/s
  double coupling_scale = 1.0;   // multiplies every segment amplitude
  double weight = 1.0;
};

struct Ensemble {
  std::vector<EnsembleMember> members;

  // Non-empty, positive scales, finite non-negative weights summing to 1.
  void validate() const;
  // Rescales weights to sum to one.
  void normalize();
};

enum class FidelityKind { RealOverlap, ImagOverlap, SquareOverlap };

std::string_view fidelity_name(FidelityKind kind);
FidelityKind parse_fidelity(std::string_view text);  // "real" | "imag" | "square"

struct EnsembleGrid {
  std::size_t n_detuning = 1;
  double detuning_range = 0.0;  // rad/s, grid spans +-range
  std::size_t n_coupling = 1;
  double coupling_range = 0.0;  // fraction of nominal, grid spans 1 +- range
  std::size_t near_resonance_extra = 0;
  double near_resonance_range = 0.0;  // rad/s; extras span +-this at scale 1
};

// Uniform detuning x coupling grid plus extra detuning points near resonance,
// all members equally weighted.
Ensemble build_ensemble(const EnsembleGrid& grid);

// Convenience with ranges in units of `nominal_rabi` and extras over +-0.1 of it.
Ensemble build_ensemble(std::size_t n_detuning, double detuning_range_rel, std::size_t n_coupling,
                        double coupling_range, std::size_t near_resonance_extra,
                        double nominal_rabi);

double fidelity_of(const Propagator2& u, FidelityKind kind);

double member_fidelity(const PulseWaveform& pulse, const EnsembleMember& member,
                       FidelityKind kind);

// Weighted sum over members, reduced in member order.
double ensemble_fidelity(const PulseWaveform& pulse, const Ensemble& ensemble, FidelityKind kind);

// Full-pulse propagators for every member, via the batched kernels.
std::vector<Propagator2> propagate_members(const PulseWaveform& pulse,
                                           std::span<const EnsembleMember> members);

std::string to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(std::string_view text);
Ensemble load_ensemble(const std::filesystem::path& source);
void save(const Ensemble& ensemble, const std::filesystem::path& destination);

}  // namespace atomgrape

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atomgrape/ensemble.hpp"
#include "atomgrape/pulse.hpp"

namespace atomgrape {

struct Sublevel {
  int m_f = 0;
  double coupling_factor = 1.0;  // multiplies Omega_eff
  double stark_shift = 0.0;      // rad/s, displaces the two-photon resonance
  double population_weight = 0.2;
};

struct SublevelSet {
  std::vector<Sublevel> levels;
  // Weights sum to one, coupling factors positive.
  void validate() const;
};

// Shipped sigma+ - sigma+ profile: five equally populated m_F levels with
// coupling factors 1 + 0.15 m_F and light shifts (0.3 + 0.5 m_F) Omega_eff.
SublevelSet default_sublevel_profile(double nominal_rabi);

// One Doppler class, detuning = k_eff * v.
struct MomentumSample {
  double detuning = 0.0;  // rad/s
  double weight = 0.0;
};

// Gaussian in detuning with the given FWHM, `points` samples over +-3 FWHM,
// trapezoidal weights normalized to one.
std::vector<MomentumSample> gaussian_momentum(double fwhm, std::size_t points = 101);

struct RamanScanConfig {
  std::vector<double> laser_detuning_grid;  // rad/s
  SublevelSet sublevels;
  std::vector<MomentumSample> momentum;
  double nominal_rabi = 0.0;  // rad/s
};

EnsembleMember sublevel_member(const Sublevel& level, double laser_detuning,
                               const MomentumSample& sample);

struct ScanPoint {
  double laser_detuning = 0.0;
  double population = 0.0;
};

// Excited population averaged over sublevels and momentum classes at each
// laser detuning. The pulse is used as given.
std::vector<ScanPoint> raman_scan(const PulseWaveform& pulse, const RamanScanConfig& config);

struct Peak {
  double laser_detuning = 0.0;
  double value = 0.0;
};

// Grid argmax (first maximum on ties) with three-point parabolic refinement.
Peak peak_population(std::span<const ScanPoint> curve);

std::vector<double> linear_grid(double lo, double hi, std::size_t n);

SublevelSet sublevels_from_json(std::string_view text);
std::string to_json(const SublevelSet& set);
SublevelSet load_sublevels(const std::filesystem::path& source);

// CSV "detuning_hz,weight"; weights are normalized on load.
std::vector<MomentumSample> momentum_from_csv(std::string_view text);
std::vector<MomentumSample> load_momentum(const std::filesystem::path& source);

std::string scan_csv(std::span<const ScanPoint> curve);

}  // namespace atomgrape

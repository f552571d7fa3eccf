#pragma once

#include <span>
#include <string>
#include <vector>

#include "atomgrape/pulse.hpp"

namespace atomgrape {

// Widths and phase variation in units of the pulse's nominal Rabi frequency.
struct RobustnessReport {
  double width_half = 0.0;     // full width of the P > 0.5 interval through delta = 0
  double width_ninety = 0.0;   // same for P > 0.9
  double max_phase_variation = 0.0;  // rad, max - min of unwrapped arg S over +-Omega_eff
  double length_t_pi = 0.0;
};

struct RobustnessOptions {
  double step = 1e-3;       // detuning step, units of Omega_eff
  double half_range = 6.0;  // scan +-half_range
  double phase_range = 1.0;
};

RobustnessReport robustness_report(const PulseWaveform& pulse, const RobustnessOptions& options = {});

// Full width of the contiguous run of samples above `threshold` that contains
// `center`, with endpoints refined by a parabola through neighbouring samples.
// Returns 0 when the center sample is not above threshold.
double threshold_width(std::span<const double> x, std::span<const double> y, std::size_t center,
                       double threshold);

struct ResponsePoint {
  double detuning = 0.0;  // rad/s
  double population = 0.0;
  double phase = 0.0;          // unwrapped arg S
  bool phase_interpolated = false;  // |S| below 1e-6, branch filled linearly
};

// Population and unwrapped S phase over [-range, range] (rad/s) at scale 1.
// The unwrap is seeded at the sample nearest delta = 0.
std::vector<ResponsePoint> response_curve(const PulseWaveform& pulse, double detuning_range,
                                          std::size_t n_points);

inline constexpr double kPhaseFlagThreshold = 1e-6;

struct ContourGrid {
  std::vector<double> detuning_axis;  // rad/s
  std::vector<double> coupling_axis;  // scales
  // populations[i * detuning_axis.size() + j] for coupling i, detuning j
  std::vector<double> populations;
  std::vector<double> contour_levels;

  double at(std::size_t coupling_index, std::size_t detuning_index) const {
    return populations[coupling_index * detuning_axis.size() + detuning_index];
  }
};

inline const std::vector<double> kContourLevels{0.15, 0.3, 0.45, 0.6, 0.75, 0.9, 0.95};

// Grid over detuning in [-detuning_range, detuning_range] (rad/s) and coupling
// scale in [1 - coupling_range, 1 + coupling_range].
ContourGrid contour_grid(const PulseWaveform& pulse, double detuning_range, double coupling_range,
                         std::size_t resolution);

struct TableRow {
  std::string name;
  std::string sequence;
  RobustnessReport report;
};

// Catalog rows first, then any extra pulses.
struct NamedPulse {
  std::string name;
  PulseWaveform pulse;
};
std::vector<TableRow> table_one_report(std::span<const NamedPulse> optimized,
                                       const RobustnessOptions& options = {});

std::string table_csv(std::span<const TableRow> rows);
std::string table_text(std::span<const TableRow> rows);

std::string response_csv(std::span<const ResponsePoint> curve, double nominal_rabi);
std::string contour_csv(const ContourGrid& grid, double nominal_rabi);

}  // namespace atomgrape

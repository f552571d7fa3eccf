#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace atomgrape {

// One rotation element: constant amplitude and phase for `duration` seconds.
struct PulseSegment {
  double duration = 0.0;  // s
  double rabi = 0.0;      // rad/s
  double phase = 0.0;     // rad

  bool operator==(const PulseSegment&) const = default;
};

// Piecewise-constant control waveform. `nominal_rabi` is the design amplitude
// Omega_eff, used as the unit for detuning axes and t_pi.
struct PulseWaveform {
  std::vector<PulseSegment> segments;
  double nominal_rabi = 0.0;  // rad/s

  double total_duration() const;
  // Duration of a rectangular pi pulse at nominal_rabi.
  double t_pi() const;
  double length_in_t_pi() const { return total_duration() / t_pi(); }

  // Throws ValidationError on empty list, non-positive durations, negative or
  // non-finite amplitudes, or non-positive nominal_rabi.
  void validate() const;

  bool operator==(const PulseWaveform&) const = default;
};

// Rotation angles and phases in degrees, as composite sequences are usually written.
struct CompositeElement {
  double angle_deg;
  double phase_deg;
};

struct CompositeSpec {
  std::string name;
  std::string description;
  std::vector<CompositeElement> elements;
  // Length in units of t_pi as a ratio, e.g. CORPSE = 13/3.
  int length_num;
  int length_den;
};

PulseWaveform rectangular(double angle, double phase, double rabi);

const std::vector<CompositeSpec>& composite_catalog();
const CompositeSpec& find_composite(std::string_view name);  // NotFoundError
PulseWaveform composite(std::string_view name, double rabi);
PulseWaveform from_composite_spec(const CompositeSpec& spec, double rabi);

// Splits every segment into the smallest number of equal slices no longer
// than `timestep`.
PulseWaveform discretize(const PulseWaveform& pulse, double timestep);

// Returns the common slice duration, or 0 when slices differ by more than a
// relative 1e-9.
double uniform_slice_duration(const PulseWaveform& pulse);

// Flat constant-phase pulse of `n_slices` equal slices at `rabi`.
PulseWaveform flat_pulse(double duration, double rabi, std::size_t n_slices, double phase = 0.0);

// Same phase profile and length in t_pi, re-expressed at a new amplitude.
PulseWaveform rescale_rabi(const PulseWaveform& pulse, double new_rabi);

// Adds `offset` to every segment phase.
PulseWaveform shift_phase(const PulseWaveform& pulse, double offset);

// JSON pulse file: {"nominal_rabi_hz", "segments": [{"duration_s","rabi_hz","phase_rad"}]}.
std::string to_json(const PulseWaveform& pulse);
PulseWaveform pulse_from_json(std::string_view text);
void save(const PulseWaveform& pulse, const std::filesystem::path& destination);
PulseWaveform load_pulse(const std::filesystem::path& source);

}  // namespace atomgrape

#pragma once

#include <numbers>
#include <string_view>

namespace atomgrape {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace physics {
inline constexpr double kBoltzmann = 1.380649e-23;         // J/K
inline constexpr double kRb85Mass = 1.4100e-25;            // kg
inline constexpr double kRamanWavelength = 780e-9;         // m
// Counter-propagating Raman beams: k_eff = k1 + k2 ~ 2k.
inline constexpr double kRb85EffectiveWavevector = 2.0 * kTwoPi / kRamanWavelength;
}  // namespace physics

inline constexpr double hz_to_angular(double hz) { return kTwoPi * hz; }
inline constexpr double angular_to_hz(double w) { return w / kTwoPi; }

// Parses "200kHz", "2.5 MHz", "360e3", "1e6Hz" into angular frequency (rad/s).
// A bare number is read as ordinary frequency in Hz.
double parse_frequency(std::string_view text);

// Finds a double h with kTwoPi * h == w exactly when one exists nearby, so that
// writing h and multiplying by 2pi on load is lossless. Falls back to w / 2pi.
double angular_to_hz_exact(double w);

}  // namespace atomgrape

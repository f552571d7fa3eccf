#include "atomgrape/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "atomgrape/errors.hpp"

namespace atomgrape {

double parse_frequency(std::string_view text) {
  std::size_t begin = 0;
  while (begin < text.size() && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  text.remove_prefix(begin);

  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || !std::isfinite(value)) {
    throw ValidationError("not a frequency: '" + std::string(text) + "'");
  }
  std::string unit(ptr, text.data() + text.size());
  std::erase_if(unit, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  for (auto& c : unit) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  double multiplier = 1.0;
  if (unit.empty() || unit == "hz") {
    multiplier = 1.0;
  } else if (unit == "khz") {
    multiplier = 1e3;
  } else if (unit == "mhz") {
    multiplier = 1e6;
  } else if (unit == "ghz") {
    multiplier = 1e9;
  } else {
    throw ValidationError("unknown frequency unit '" + unit + "'");
  }
  return hz_to_angular(value * multiplier);
}

double angular_to_hz_exact(double w) {
  const double guess = w / kTwoPi;
  if (!std::isfinite(guess) || kTwoPi * guess == w) return guess;
  double up = guess;
  double down = guess;
  for (int i = 0; i < 4; ++i) {
    up = std::nextafter(up, INFINITY);
    down = std::nextafter(down, -INFINITY);
    if (kTwoPi * up == w) return up;
    if (kTwoPi * down == w) return down;
  }
  return guess;
}

}  // namespace atomgrape

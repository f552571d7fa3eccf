#include <doctest.h>

#include <filesystem>
#include <random>

#include "atomgrape/dynamics.hpp"
#include "atomgrape/errors.hpp"
#include "atomgrape/io.hpp"
#include "atomgrape/pulse.hpp"
#include "support.hpp"

using namespace atomgrape;
using testing::kRabi;

TEST_CASE("rectangular pulses") {
  const auto pi = rectangular(kPi, 0.0, kRabi);
  REQUIRE(pi.segments.size() == 1);
  CHECK(pi.segments[0].duration == doctest::Approx(kPi / kRabi));
  const auto half = rectangular(0.5 * kPi, 0.5 * kPi, kRabi);
  CHECK(half.segments[0].duration == doctest::Approx(0.5 * kPi / kRabi));
  CHECK(half.segments[0].phase == 0.5 * kPi);
  const auto full = rectangular(kTwoPi, 0.0, kRabi);
  CHECK(excited_population(propagate_waveform(full, 0.0, 1.0)) < 1e-24);
  CHECK_THROWS_AS(rectangular(0.0, 0.0, kRabi), ValidationError);
  CHECK_THROWS_AS(rectangular(kPi, 0.0, -kRabi), ValidationError);
}

TEST_CASE("catalog lengths match the published ratios") {
  for (const auto& spec : composite_catalog()) {
    CAPTURE(spec.name);
    const auto p = from_composite_spec(spec, kRabi);
    CHECK(p.length_in_t_pi() ==
          doctest::Approx(static_cast<double>(spec.length_num) / spec.length_den).epsilon(1e-12));
    // elements in degrees add up to the same ratio
    double degrees = 0.0;
    for (const auto& e : spec.elements) degrees += e.angle_deg;
    CHECK(degrees * spec.length_den == doctest::Approx(180.0 * spec.length_num));
  }
  CHECK(composite("waltz", kRabi).total_duration() == doctest::Approx(3.0 * kPi / kRabi));
  CHECK(composite("CORPSE", kRabi).length_in_t_pi() == doctest::Approx(13.0 / 3.0));
  CHECK(composite_catalog().size() == 7);
}

TEST_CASE("every catalog pulse inverts at resonance") {
  for (const auto& spec : composite_catalog()) {
    CAPTURE(spec.name);
    CHECK(excited_population(propagate_waveform(from_composite_spec(spec, kRabi), 0.0, 1.0)) >= 0.999);
  }
  CHECK(excited_population(propagate_waveform(composite("knill", kRabi), 0.0, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unknown composite") {
  CHECK_THROWS_AS(composite("nonsense", kRabi), NotFoundError);
  CHECK_THROWS_AS(find_composite(""), ValidationError);
}

TEST_CASE("discretize") {
  const auto flat = flat_pulse(20e-6, kRabi, 1);
  const auto sliced = discretize(flat, 100e-9);
  CHECK(sliced.segments.size() == 200);
  CHECK(uniform_slice_duration(sliced) == doctest::Approx(100e-9));

  const auto waltz = composite("waltz", kRabi);
  CHECK(discretize(waltz, 1.0).segments == waltz.segments);

  const auto fine = discretize(waltz, 50e-9);
  for (double d : {-2.0, -0.5, 0.0, 0.5, 1.7}) {
    for (double s : {0.8, 1.0, 1.2}) {
      CHECK(std::abs(excited_population(propagate_waveform(fine, d * kRabi, s)) -
                     excited_population(propagate_waveform(waltz, d * kRabi, s))) < 1e-12);
      CHECK(testing::max_abs_diff(propagate_waveform(fine, d * kRabi, s),
                                  propagate_waveform(waltz, d * kRabi, s)) < 1e-12);
    }
  }
  // idempotent when the step divides every segment
  CHECK(discretize(sliced, 100e-9).segments.size() == sliced.segments.size());
  CHECK(uniform_slice_duration(fine) == doctest::Approx(50e-9).epsilon(1e-9));
  CHECK(uniform_slice_duration(discretize(waltz, 300e-9)) == 0.0);
  CHECK_THROWS_AS(discretize(flat, 0.0), ValidationError);
}

TEST_CASE("rescale and shift") {
  const auto waltz = composite("waltz", kRabi);
  const auto fast = rescale_rabi(waltz, 1.8 * kRabi);
  CHECK(fast.length_in_t_pi() == doctest::Approx(3.0));
  CHECK(excited_population(propagate_waveform(fast, 0.9 * kRabi, 1.0)) ==
        doctest::Approx(excited_population(propagate_waveform(waltz, 0.5 * kRabi, 1.0))).epsilon(1e-12));
  const auto shifted = shift_phase(waltz, 0.3);
  CHECK(shifted.segments[1].phase == doctest::Approx(waltz.segments[1].phase + 0.3));
}

TEST_CASE("pulse file round trip is bit exact") {
  std::mt19937_64 rng(42);
  auto p = testing::random_pulse(rng, 200, kRabi, 1e-7);
  p.segments[3].phase = 1e-300;
  p.segments[4].phase = -0.0;
  const auto back = pulse_from_json(to_json(p));
  CHECK(back.nominal_rabi == p.nominal_rabi);
  REQUIRE(back.segments.size() == p.segments.size());
  for (std::size_t i = 0; i < p.segments.size(); ++i) {
    CHECK(back.segments[i].duration == p.segments[i].duration);
    CHECK(back.segments[i].rabi == p.segments[i].rabi);
    CHECK(back.segments[i].phase == p.segments[i].phase);
  }

  const auto dir = std::filesystem::temp_directory_path() / "atomgrape_pulse_test";
  std::filesystem::create_directories(dir);
  save(p, dir / "p.json");
  CHECK(load_pulse(dir / "p.json").segments == p.segments);
  std::filesystem::remove_all(dir);
}

TEST_CASE("pulse file errors") {
  const std::string negative =
      "{\n  \"nominal_rabi_hz\": 200000,\n  \"segments\": [\n"
      "    {\"duration_s\": 1e-6, \"rabi_hz\": 200000, \"phase_rad\": 0},\n"
      "    {\"duration_s\": -1e-6, \"rabi_hz\": 200000, \"phase_rad\": 0}\n  ]\n}\n";
  CHECK_THROWS_AS(pulse_from_json(negative), ValidationError);

  const std::string empty = "{\"nominal_rabi_hz\": 200000, \"segments\": []}";
  CHECK_THROWS_AS(pulse_from_json(empty), ValidationError);

  const std::string missing =
      "{\n  \"nominal_rabi_hz\": 200000,\n  \"segments\": [\n"
      "    {\"duration_s\": 1e-6, \"rabi_hz\": 200000, \"phase_rad\": 0},\n"
      "    {\"duration_s\": 1e-6, \"phase_rad\": 0}\n  ]\n}\n";
  try {
    pulse_from_json(missing);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }

  const std::string broken = "{\n  \"nominal_rabi_hz\": 200000,\n  \"segments\": [\n    {\"duration_s\": }\n";
  try {
    pulse_from_json(broken);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

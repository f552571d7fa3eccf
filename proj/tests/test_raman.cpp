#include <doctest.h>

#include <cmath>

#include "atomgrape/errors.hpp"
#include "atomgrape/interferometer.hpp"
#include "atomgrape/raman.hpp"
#include "support.hpp"

using namespace atomgrape;

namespace {

constexpr double kRaman = kTwoPi * 360e3;

RamanScanConfig single_level(double stark, std::vector<MomentumSample> momentum) {
  RamanScanConfig c;
  c.nominal_rabi = kRaman;
  c.laser_detuning_grid = linear_grid(-2.0 * kRaman, 2.0 * kRaman, 81);
  c.sublevels.levels = {{0, 1.0, stark, 1.0}};
  c.momentum = std::move(momentum);
  return c;
}

}  // namespace

TEST_CASE("sublevel members") {
  const Sublevel plain{0, 1.0, 0.0, 1.0};
  const auto m = sublevel_member(plain, 0.0, {0.0, 1.0});
  CHECK(m.detuning_offset == 0.0);
  CHECK(m.coupling_scale == 1.0);
  CHECK(m.weight == 1.0);

  const Sublevel shifted{1, 1.2, 0.3 * kRaman, 0.25};
  CHECK(sublevel_member(shifted, 0.3 * kRaman, {0.0, 1.0}).detuning_offset == 0.0);
  const auto up = sublevel_member(shifted, 0.5 * kRaman, {0.2 * kRaman, 0.5});
  const auto down = sublevel_member(shifted, 0.5 * kRaman, {-0.2 * kRaman, 0.5});
  CHECK(up.detuning_offset - 0.2 * kRaman == doctest::Approx(0.2 * kRaman));
  CHECK(down.detuning_offset + 0.2 * kRaman == doctest::Approx(0.2 * kRaman));
  CHECK(up.weight == doctest::Approx(0.125));
  CHECK(up.coupling_scale == 1.2);
}

TEST_CASE("single level without motion reproduces the detuning response") {
  const auto pi = rectangular(kPi, 0.0, kRaman);
  const auto c = single_level(0.0, {{0.0, 1.0}});
  const auto curve = raman_scan(pi, c);
  for (const auto& p : curve) {
    CHECK(std::abs(p.population - excited_population(propagate_waveform(pi, p.laser_detuning, 1.0))) < 1e-12);
  }
  const auto peak = peak_population(curve);
  CHECK(peak.laser_detuning == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(peak.value == doctest::Approx(1.0).epsilon(1e-9));

  const auto shifted = raman_scan(pi, single_level(0.3 * kRaman, {{0.0, 1.0}}));
  const double step = c.laser_detuning_grid[1] - c.laser_detuning_grid[0];
  CHECK(std::abs(peak_population(shifted).laser_detuning - 0.3 * kRaman) < step);
}

TEST_CASE("averaged population is a convex combination") {
  const auto waltz = composite("waltz", kRaman);
  RamanScanConfig c;
  c.nominal_rabi = kRaman;
  c.laser_detuning_grid = linear_grid(-2.0 * kRaman, 2.0 * kRaman, 21);
  c.sublevels = default_sublevel_profile(kRaman);
  c.momentum = gaussian_momentum(1.5 * kRaman, 21);
  const auto curve = raman_scan(waltz, c);
  for (const auto& p : curve) {
    double lo = 1.0, hi = 0.0;
    for (const auto& l : c.sublevels.levels) {
      for (const auto& s : c.momentum) {
        const auto m = sublevel_member(l, p.laser_detuning, s);
        const double v = excited_population(propagate_waveform(waltz, m.detuning_offset, m.coupling_scale));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    CHECK(p.population >= lo - 1e-12);
    CHECK(p.population <= hi + 1e-12);
    CHECK(p.population <= 1.0);
  }
}

TEST_CASE("default profile") {
  const auto set = default_sublevel_profile(kRaman);
  REQUIRE(set.levels.size() == 5);
  CHECK(set.levels.front().coupling_factor == doctest::Approx(0.7));
  CHECK(set.levels.back().coupling_factor == doctest::Approx(1.3));
  double total = 0.0;
  for (const auto& l : set.levels) total += l.population_weight;
  CHECK(total == doctest::Approx(1.0));
  CHECK(set.levels[2].stark_shift == doctest::Approx(0.3 * kRaman));
  CHECK_THROWS_AS(default_sublevel_profile(0.0), ValidationError);
}

TEST_CASE("gaussian momentum distribution") {
  const auto m = gaussian_momentum(1.5 * kRaman);
  REQUIRE(m.size() == 101);
  double total = 0.0, mean = 0.0, var = 0.0;
  for (const auto& s : m) total += s.weight;
  for (const auto& s : m) mean += s.weight * s.detuning;
  for (const auto& s : m) var += s.weight * s.detuning * s.detuning;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(mean) < 1e-6 * kRaman);
  const double sigma = 1.5 * kRaman / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  CHECK(std::sqrt(var) == doctest::Approx(sigma).epsilon(1e-3));
  CHECK(m.front().detuning == doctest::Approx(-4.5 * kRaman));
  CHECK(gaussian_momentum(0.0).size() == 1);
}

TEST_CASE("momentum width corresponds to about 80 uK") {
  ThermalModel t;
  t.temperature = 80e-6;
  const double fwhm = 2.0 * std::sqrt(2.0 * std::log(2.0)) * t.detuning_sigma();
  CHECK(fwhm == doctest::Approx(1.5 * kRaman).epsilon(0.1));
}

TEST_CASE("peak finding") {
  std::vector<ScanPoint> flat;
  for (int i = 0; i < 5; ++i) flat.push_back({i - 2.0, 0.4});
  CHECK(peak_population(flat).laser_detuning == -2.0);

  std::vector<ScanPoint> lobe;
  for (int i = -10; i <= 10; ++i) lobe.push_back({0.1 * i + 0.03, 1.0 - std::pow(0.1 * i, 2)});
  const auto p = peak_population(lobe);
  CHECK(p.laser_detuning == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(p.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(peak_population({}), ValidationError);
}

TEST_CASE("profile and momentum files") {
  const auto set = default_sublevel_profile(kRaman);
  const auto back = sublevels_from_json(to_json(set));
  REQUIRE(back.levels.size() == set.levels.size());
  for (std::size_t i = 0; i < set.levels.size(); ++i) {
    CHECK(back.levels[i].m_f == set.levels[i].m_f);
    CHECK(back.levels[i].stark_shift == doctest::Approx(set.levels[i].stark_shift).epsilon(1e-15));
    CHECK(back.levels[i].coupling_factor == set.levels[i].coupling_factor);
  }
  CHECK_THROWS_AS(sublevels_from_json(R"({"levels": [{"m_f": 0.5, "coupling_factor": 1,
      "stark_shift_hz": 0, "weight": 1}]})"), ParseError);
  CHECK_THROWS_AS(sublevels_from_json(R"({"levels": [{"m_f": 0, "coupling_factor": -1,
      "stark_shift_hz": 0, "weight": 1}]})"), ValidationError);

  const auto m = momentum_from_csv("detuning_hz,weight\n-1000,1\n0,2\n1000,1\n");
  REQUIRE(m.size() == 3);
  CHECK(m[1].weight == doctest::Approx(0.5));
  CHECK(m[2].detuning == doctest::Approx(kTwoPi * 1000));
  try {
    momentum_from_csv("detuning_hz,weight\n0,1\nabc,2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(momentum_from_csv("0,-1\n"), ParseError);
  CHECK(scan_csv(std::vector<ScanPoint>{{kTwoPi * 10.0, 0.5}}) == "laser_detuning_hz,population\n10,0.5\n");
}

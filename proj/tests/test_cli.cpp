#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "atomgrape/io.hpp"
#include "atomgrape/pulse.hpp"

namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("pulsectl_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(PULSECTL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) { return atomgrape::io::read_file(path); }

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("catalog commands") {
  Sandbox box;
  CHECK(run("catalog list --out " + box.path("cat.csv")) == 0);
  CHECK(count_lines(slurp(box.path("cat.csv"))) == 8);
  CHECK(run("catalog emit waltz --rabi 360kHz --out " + box.path("w.json")) == 0);
  const auto p = atomgrape::load_pulse(box.path("w.json"));
  CHECK(p.length_in_t_pi() == doctest::Approx(3.0));
  CHECK(run("catalog emit nonexistent") == 2);
  CHECK(run("catalog emit waltz --rabi fast") == 2);
}

TEST_CASE("analysis commands write csv and metadata") {
  Sandbox box;
  REQUIRE(run("catalog emit rectangular --out " + box.path("pi.json")) == 0);
  CHECK(run("respond --pulse " + box.path("pi.json") + " --range 2 --points 41 --out " + box.path("r.csv")) == 0);
  CHECK(count_lines(slurp(box.path("r.csv"))) == 42);
  const auto meta = nlohmann::json::parse(slurp(box.path("r.csv.meta.json")));
  CHECK(meta.contains("command_line"));
  CHECK(meta.contains("versions"));
  CHECK(meta["wall_time_s"].get<double>() >= 0.0);

  CHECK(run("contour --pulse " + box.path("pi.json") + " --res 6 --out " + box.path("c.csv")) == 0);
  CHECK(count_lines(slurp(box.path("c.csv"))) == 37);
  const auto cmeta = nlohmann::json::parse(slurp(box.path("c.csv.meta.json")));
  CHECK(cmeta["details"]["contour_levels"].size() == 7);

  CHECK(run("report --pulses " + box.path("pi.json") + " --out " + box.path("t.csv")) == 0);
  CHECK(count_lines(slurp(box.path("t.csv"))) == 9);
}

TEST_CASE("interferometer and raman commands") {
  Sandbox box;
  REQUIRE(run("catalog emit rectangular --out " + box.path("pi.json")) == 0);
  REQUIRE(run("catalog emit rectangular --angle 90 --out " + box.path("half.json")) == 0);
  const auto pi = atomgrape::load_pulse(box.path("pi.json"));
  const auto half = atomgrape::load_pulse(box.path("half.json"));
  CHECK(half.segments[0].duration == doctest::Approx(0.5 * pi.segments[0].duration).epsilon(1e-15));
  CHECK(run("catalog emit waltz --angle 90") == 2);
  CHECK(run("mz-contrast --beamsplitter " + box.path("half.json") + " --mirrors " + box.path("pi.json") +
            " --temps 1,20 --out " + box.path("mz.csv")) == 0);
  const auto mz = slurp(box.path("mz.csv"));
  CHECK(count_lines(mz) == 5);
  CHECK(mz.find("perfect_pi,20,") != std::string::npos);

  CHECK(run("raman-scan --pulse " + box.path("pi.json") + " --rabi 360kHz --profile " DATA_DIR
            "/sigma_plus_profile.json --points 21 --out " + box.path("rs.csv")) == 0);
  CHECK(count_lines(slurp(box.path("rs.csv"))) == 22);
  const auto meta = nlohmann::json::parse(slurp(box.path("rs.csv.meta.json")));
  CHECK(meta["details"]["peak_population"].get<double>() <= 1.0);
}

TEST_CASE("optimize command") {
  Sandbox box;
  {
    std::ofstream cfg(box.path("cfg.json"));
    cfg << R"({"max_iterations": 5, "timestep": 1e-7, "nominal_rabi_hz": 200000, "duration_s": 5e-6})";
  }
  CHECK(run("optimize --config " + box.path("cfg.json") +
            " --n-detuning 4 --n-coupling 2 --extra 1 --fidelity real --out " + box.path("o.json")) == 0);
  const auto p = atomgrape::load_pulse(box.path("o.json"));
  CHECK(p.segments.size() == 50);
  const auto report = nlohmann::json::parse(slurp(box.path("o.json.report.json")));
  CHECK(report["ensemble_size"] == 9);
  CHECK(report["fidelity_trace"].size() == report["iterations"].get<std::size_t>() + 1);
  CHECK(fs::exists(box.path("o.json.meta.json")));
  CHECK(run("optimize --config " + box.path("cfg.json") + " --fidelity best --out " + box.path("x.json")) == 2);
}

TEST_CASE("exit codes for bad input") {
  Sandbox box;
  CHECK(run("respond --pulse " + box.path("missing.json")) == 2);
  {
    std::ofstream bad(box.path("bad.json"));
    bad << "{\n  \"nominal_rabi_hz\": 200000,\n  \"segments\": [\n    {\"duration_s\": -1, \"rabi_hz\": 1, \"phase_rad\": 0}\n  ]\n}\n";
  }
  CHECK(run("respond --pulse " + box.path("bad.json")) == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("mz-contrast --beamsplitter " + box.path("bad.json") + " --temps 1") == 2);
  CHECK(run("--help") == 0);
}

#include <doctest.h>

#include <filesystem>
#include <random>

#include "atomgrape/errors.hpp"
#include "atomgrape/io.hpp"
#include "atomgrape/units.hpp"

using namespace atomgrape;

TEST_CASE("frequency strings") {
  CHECK(parse_frequency("200kHz") == doctest::Approx(kTwoPi * 200e3));
  CHECK(parse_frequency("1.5 MHz") == doctest::Approx(kTwoPi * 1.5e6));
  CHECK(parse_frequency("50") == doctest::Approx(kTwoPi * 50));
  CHECK(parse_frequency("3GHz") == doctest::Approx(kTwoPi * 3e9));
  CHECK_THROWS_AS(parse_frequency("fast"), ValidationError);
  CHECK_THROWS_AS(parse_frequency("10 parsecs"), ValidationError);
  CHECK_THROWS_AS(parse_frequency(""), ValidationError);
}

TEST_CASE("exact Hz recovery") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> hz(1.0, 1e7);
  for (int i = 0; i < 1000; ++i) {
    const double h = hz(rng);
    const double w = hz_to_angular(h);
    CHECK(hz_to_angular(angular_to_hz_exact(w)) == w);
  }
}

TEST_CASE("csv quoting") {
  CHECK(io::csv_field("plain") == "plain");
  CHECK(io::csv_field("a,b") == "\"a,b\"");
  CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(io::csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(io::csv_number(-0.0) == "0");
  CHECK(io::csv_number(0.25) == "0.25");
}

TEST_CASE("line lookup and object offsets") {
  const std::string text = "{\n \"a\": [\n  {\"x\": 1},\n  {\"x\": 2}\n ]\n}\n";
  CHECK(io::line_of_offset(text, 0) == 1);
  const auto offsets = io::object_offsets(text, 3);
  REQUIRE(offsets.size() == 2);
  CHECK(io::line_of_offset(text, offsets[0]) == 3);
  CHECK(io::line_of_offset(text, offsets[1]) == 4);
  const std::string tricky = "{\"s\": \"{not an object}\", \"l\": [{}]}";
  CHECK(io::object_offsets(tricky, 3).size() == 1);
}

TEST_CASE("atomic write and read back") {
  const auto dir = std::filesystem::temp_directory_path() / "atomgrape_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  io::write_file_atomic(path, "first");
  io::write_file_atomic(path, "second");
  CHECK(io::read_file(path) == "second");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  CHECK_THROWS_AS(io::read_file(dir / "missing.txt"), ValidationError);
  std::filesystem::remove_all(dir);
}

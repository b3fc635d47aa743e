#include <doctest.h>

#include <filesystem>
#include <string>

#include "phasereg/error.hpp"
#include "phasereg/io.hpp"
#include "phasereg/simulation.hpp"

using namespace phasereg;

namespace {

std::filesystem::path scratch_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "phasereg_unit" / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("pattern json round trip") {
  const Interval d(-2.0, 5.0);
  const std::vector<PointPattern> ps{PointPattern(d, {0.1, -1.9, 4.999999999999}),
                                     PointPattern(d, {}), PointPattern(d, {3.0})};
  const PatternCollection back = patterns_from_json(patterns_to_json(d, ps));
  CHECK(back.domain == d);
  REQUIRE(back.processes.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(back.processes[i].size() == ps[i].size());
    for (std::size_t k = 0; k < ps[i].size(); ++k) {
      CHECK(back.processes[i].points()[k] == ps[i].points()[k]);
    }
  }
}

TEST_CASE("pattern json errors") {
  try {
    patterns_from_json("{\n  \"domain\": [0, 1],\n  \"processes\": [\n    [0.1, ]\n  ]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(patterns_from_json(R"({"domain":[0,1],"processes":[[1.5]]})"),
                  ValidationError);
  CHECK_THROWS_AS(patterns_from_json(R"({"domain":[1,0],"processes":[]})"), ValidationError);
  CHECK_THROWS_AS(patterns_from_json(R"({"processes":[]})"), ValidationError);
  CHECK_THROWS_AS(patterns_from_json(R"({"domain":[0,1],"processes":[["a"]]})"),
                  ValidationError);
}

TEST_CASE("measure and warp csv round trip") {
  const DiffuseMeasure m = bimodal_measure(0.1, 257);
  const DiffuseMeasure back = measure_from_csv(measure_to_csv(m));
  REQUIRE(back.size() == m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    CHECK(back.grid()[j] == m.grid()[j]);
    CHECK(back.cdf_values()[j] == m.cdf_values()[j]);
  }
  CHECK(measure_to_csv(m).rfind("x,F\n", 0) == 0);

  const WarpMap w = WarpMap::from_function(Interval(0.0, 2.0), 65,
                                           [](double x) { return x * x / 2.0; });
  const WarpMap wb = warp_from_csv(warp_to_csv(w));
  for (double x : {0.0, 0.3, 1.1, 2.0}) CHECK(wb(x) == doctest::Approx(w(x)));
  CHECK(warp_to_csv(w).rfind("x,T(x)\n", 0) == 0);
}

TEST_CASE("csv errors") {
  CHECK_THROWS_AS(measure_from_csv("x,F\n0,0\n0.5,abc\n1,1\n"), ParseError);
  try {
    measure_from_csv("x,F\n0,0\n0.5,0.7\n0.7,0.2\n1,1\n");
    FAIL("expected a validation error");
  } catch (const ValidationError&) {
  }
  try {
    measure_from_csv("x,F\n0,0\n0.5\n1,1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(warp_from_csv("x,T(x)\n0,0\n1,0.5\n2,0.2\n"), ValidationError);
}

TEST_CASE("file helpers") {
  const auto dir = scratch_dir("files");
  write_text_file(dir / "a" / "b.txt", "hello\n");
  CHECK(read_text_file(dir / "a" / "b.txt") == "hello\n");
  CHECK_THROWS_AS(read_text_file(dir / "missing.txt"), IoError);
  std::filesystem::remove_all(dir);
}

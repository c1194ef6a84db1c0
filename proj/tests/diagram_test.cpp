#include "pdm/diagram.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include <doctest.h>

#include "pdm/diagram_io.hpp"
#include "test_util.hpp"

using namespace pdm;

TEST_CASE("diagonal distance and projection") {
  CHECK(diagonal_distance(PlanePoint{0.0, 1.0}) == 0.5);
  CHECK(diagonal_distance(PlanePoint{3.0, 3.0 + 1.0 / 3.0}) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(diagonal_distance(PlanePoint{2.0, 2.0}) == 0.0);
  CHECK(diagonal_distance(PlanePoint{-7.25, -7.25}) == 0.0);

  CHECK(diagonal_projection(PlanePoint{0.0, 1.0}) == PlanePoint{0.5, 0.5});
  CHECK(diagonal_projection(PlanePoint{2.0, 2.0}) == PlanePoint{2.0, 2.0});
  CHECK(diagonal_projection(PlanePoint{-1.0, 3.0}) == PlanePoint{1.0, 1.0});
}

TEST_CASE("diagonal distance equals l_inf distance to the projection") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 500; ++trial) {
    const PlanePoint q = pdm_test::random_point(rng);
    const PlanePoint proj = diagonal_projection(q);
    CHECK(std::abs(diagonal_distance(q) - linf_distance(q, proj)) <= 1e-12);
  }
}

TEST_CASE("diagram construction merges duplicates and rejects bad entries") {
  const PersistenceDiagram d({{PlanePoint{0.0, 1.0}, 1},
                              {PlanePoint{0.0, 1.0}, 2},
                              {PlanePoint{0.25, 0.5}, 1}});
  REQUIRE(d.entries().size() == 2);
  CHECK(d.entries()[0].point == PlanePoint{0.0, 1.0});
  CHECK(d.entries()[0].multiplicity == 3);
  CHECK(d.total_mass() == 4);
  CHECK(d.expanded_points().size() == 4);

  CHECK_THROWS_AS(PersistenceDiagram({{PlanePoint{1.0, 1.0}, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PersistenceDiagram({{PlanePoint{1.0, 0.5}, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PersistenceDiagram({{PlanePoint{0.0, 1.0}, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(PersistenceDiagram({{PlanePoint{0.0, 1.0}, -3}}), std::invalid_argument);

  // Infinite-death points are outside every bounded class and unsupported.
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(PersistenceDiagram({{PlanePoint{0.0, inf}, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PersistenceDiagram({{PlanePoint{std::nan(""), 1.0}, 1}}),
                  std::invalid_argument);
}

TEST_CASE("class membership and its monotonicity") {
  const PersistenceDiagram d = PersistenceDiagram::from_points(
      {PlanePoint{-0.5, 0.5}, PlanePoint{0.0, 0.9}});
  CHECK(d.in_class(DiagramClassParams(3, 1.0)));
  CHECK_FALSE(d.in_class(DiagramClassParams(2, 1.0)));   // mass must be < N
  CHECK_FALSE(d.in_class(DiagramClassParams(3, 0.6)));
  CHECK(d.in_class(DiagramClassParams(std::nullopt, 0.9)));
  CHECK(d.in_class(DiagramClassParams(3, std::nullopt)));

  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const PersistenceDiagram random = pdm_test::random_diagram_up_to(rng, 8);
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 12);
    const double l = 0.1 + pdm_test::uniform_unit(rng) * 2.0;
    if (random.in_class(DiagramClassParams(n, l))) {
      CHECK(random.in_class(DiagramClassParams(n + 3, l)));
      CHECK(random.in_class(DiagramClassParams(n, l + 1.0)));
      CHECK(random.in_class(DiagramClassParams(n + 3, l + 1.0)));
    }
  }

  CHECK_THROWS_AS(DiagramClassParams(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DiagramClassParams(1, 0.0), std::invalid_argument);
}

TEST_CASE("uniform sampling: support, mass, determinism") {
  const PersistenceDiagram d = sample_uniform_diagram(10, 42);
  CHECK(d.total_mass() == 10);
  for (const auto& e : d.entries()) {
    CHECK(e.point.birth >= 0.0);
    CHECK(e.point.birth <= e.point.death);
    CHECK(e.point.death <= 1.0);
  }

  const PersistenceDiagram single = sample_uniform_diagram(1, 7);
  CHECK(single.total_mass() == 1);

  CHECK(sample_uniform_diagram(50, 123) == sample_uniform_diagram(50, 123));
  CHECK_FALSE(sample_uniform_diagram(50, 123) == sample_uniform_diagram(50, 124));
  CHECK_THROWS_AS(sample_uniform_diagram(0, 1), std::invalid_argument);
}

TEST_CASE("uniform sampling: mean persistence matches E|U-V| = 1/3") {
  const PersistenceDiagram d = sample_uniform_diagram(100000, 2026);
  double mean = 0.0;
  for (const auto& e : d.entries()) {
    mean += (e.point.death - e.point.birth) * e.multiplicity;
  }
  mean /= static_cast<double>(d.total_mass());
  CHECK(std::abs(mean - 1.0 / 3.0) < 0.01);

  // Independent Monte-Carlo oracle: |U - V| for U, V uniform via a plain LCG.
  std::uint64_t state = 88172645463325252ULL;
  auto lcg_unit = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  double oracle = 0.0;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) oracle += std::abs(lcg_unit() - lcg_unit());
  oracle /= samples;
  CHECK(std::abs(oracle - 1.0 / 3.0) < 0.01);
  CHECK(std::abs(oracle - mean) < 0.02);
}

TEST_CASE("csv parsing: basic rows, merging, comments, crlf") {
  const PersistenceDiagram d = parse_diagram_csv("0.0,1.0,1\n", "test");
  REQUIRE(d.entries().size() == 1);
  CHECK(d.entries()[0].point == PlanePoint{0.0, 1.0});
  CHECK(d.entries()[0].multiplicity == 1);

  const PersistenceDiagram merged = parse_diagram_csv("0.5,2\n0.5,2\n", "test");
  REQUIRE(merged.entries().size() == 1);
  CHECK(merged.entries()[0].multiplicity == 2);

  const PersistenceDiagram commented =
      parse_diagram_csv("# header comment\r\n0,1\r\n\r\n# tail\r\n", "test");
  CHECK(commented.total_mass() == 1);

  CHECK(parse_diagram_csv("", "test").empty());
}

TEST_CASE("csv parsing: errors carry line numbers") {
  auto message_of = [](const std::string& text) {
    try {
      parse_diagram_csv(text, "bad.csv");
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message_of("0,1\nnot-a-number,2\n").find("bad.csv:2") != std::string::npos);
  CHECK(message_of("0,1\n0,1\n3,2\n").find("bad.csv:3") != std::string::npos);
  CHECK(message_of("3,2\n").find("death < birth") != std::string::npos);
  CHECK(message_of("1,1\n").find("diagonal") != std::string::npos);
  CHECK(message_of("0,1,0\n").find("multiplicity") != std::string::npos);
  CHECK(message_of("0,1,-2\n").find("multiplicity") != std::string::npos);
  CHECK(message_of("0,1,2,9\n").find("fields") != std::string::npos);
  CHECK(message_of("0,inf\n").find("non-finite") != std::string::npos);
  CHECK(message_of("nan,1\n").find("non-finite") != std::string::npos);
}

TEST_CASE("csv parsing: utf-8 byte order mark is tolerated") {
  const PersistenceDiagram d = parse_diagram_csv("\xEF\xBB\xBF" "0,1\n", "bom");
  CHECK(d.total_mass() == 1);
}

TEST_CASE("csv round trip through a file") {
  const PersistenceDiagram d = sample_uniform_diagram(1000, 99);
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "pdm_roundtrip_test.csv";
  write_diagram(d, path.string());
  const PersistenceDiagram back = read_diagram(path.string());
  CHECK(back == d);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(read_diagram("/nonexistent/path/to/diagram.csv"), DataError);
}

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "qdfit/errors.hpp"
#include "qdfit/histogram.hpp"
#include "qdfit/ingest.hpp"
#include "qdfit/synth.hpp"

using namespace qdfit;

namespace {

DisplacementField parse_text(const std::string& text,
                             const std::string& case_id = "test") {
  std::istringstream in(text);
  return parse_displacement_csv(in, case_id);
}

}  // namespace

TEST_CASE("parse_displacement_csv reads the three-row example") {
  const auto field = parse_text(
      "node_id,ux,uy,uz\n"
      "1,0,0,0\n"
      "2,1,-2,0.5\n"
      "3,0.1,0.1,0.1\n");
  REQUIRE(field.n_total() == 3);
  CHECK(field.case_id == "test");
  CHECK(field.nodes[0].node_id == 1);
  CHECK(field.nodes[1].ux == 1.0);
  CHECK(field.nodes[1].uy == -2.0);
  CHECK(field.nodes[1].uz == 0.5);
  CHECK(field.nodes[2].node_id == 3);
}

TEST_CASE("parse_displacement_csv accepts CRLF and comment lines") {
  const auto field = parse_text(
      "node_id,ux,uy,uz\r\n"
      "# exported by a solver\r\n"
      "1,1,2,3\r\n"
      "2,4,5,6\r\n");
  REQUIRE(field.n_total() == 2);
  CHECK(field.nodes[1].uz == 6.0);
}

TEST_CASE("parse_displacement_csv rejects a malformed row with its line") {
  try {
    parse_text(
        "node_id,ux,uy,uz\n"
        "1,0,0,0\n"
        "2,1,x,0.5\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("parse_displacement_csv rejects duplicates, non-finite, short input") {
  CHECK_THROWS_AS(parse_text("node_id,ux,uy,uz\n1,0,0,0\n1,1,1,1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_text("node_id,ux,uy,uz\n1,0,0,0\n2,nan,0,0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_text("node_id,ux,uy,uz\n1,0,0,0\n2,inf,0,0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_text("node_id,ux,uy,uz\n1,0,0,0\n"), ParseError);
  CHECK_THROWS_AS(parse_text(""), ParseError);
  CHECK_THROWS_AS(parse_text("id,ux,uy,uz\n1,0,0,0\n2,0,0,1\n"), ParseError);
  CHECK_THROWS_AS(parse_text("node_id,ux,uy,uz\n0,0,0,0\n2,0,0,1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_text("node_id,ux,uy,uz\n-3,0,0,0\n2,0,0,1\n"),
                  ParseError);
}

TEST_CASE("a mesh-density export of ~4950 rows parses without error") {
  SynthSpec spec;
  spec.n_nodes = 4950;
  spec.law = UniformLaw{0.0, 1.0};
  spec.seed = 31;
  const auto field = generate_field(spec);
  std::ostringstream csv;
  write_displacement_csv(field, csv);
  const auto parsed = parse_text(csv.str());
  CHECK(parsed.n_total() == 4950);
}

TEST_CASE("round trip preserves every value exactly") {
  SynthSpec spec;
  spec.n_nodes = 500;
  spec.law = LogNormalLaw{0.0, 1.5};
  spec.zero_fraction = 0.1;
  spec.seed = 77;
  const auto field = generate_field(spec, "rt");

  std::ostringstream first;
  write_displacement_csv(field, first);
  std::istringstream back(first.str());
  const auto parsed = parse_displacement_csv(back, "rt");

  REQUIRE(parsed.n_total() == field.n_total());
  for (std::size_t i = 0; i < field.nodes.size(); ++i) {
    CHECK(parsed.nodes[i].node_id == field.nodes[i].node_id);
    CHECK(parsed.nodes[i].ux == field.nodes[i].ux);
    CHECK(parsed.nodes[i].uy == field.nodes[i].uy);
    CHECK(parsed.nodes[i].uz == field.nodes[i].uz);
  }

  std::ostringstream second;
  write_displacement_csv(parsed, second);
  CHECK(first.str() == second.str());
}

TEST_CASE("displacement_norm matches the 1-norm formula") {
  CHECK(displacement_norm({1, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(displacement_norm({1, 1.0, -2.0, 0.5}) == 3.5);
}

TEST_CASE("displacement_norm symmetry, homogeneity and triangle inequality") {
  SplitMix64 rng(12345);
  for (int rep = 0; rep < 200; ++rep) {
    const double a = rng.uniform(-10.0, 10.0);
    const double b = rng.uniform(-10.0, 10.0);
    const double c = rng.uniform(-10.0, 10.0);
    const NodeDisplacement u{1, a, b, c};
    const NodeDisplacement neg{1, -a, -b, -c};
    CHECK(displacement_norm(u) == displacement_norm(neg));

    const double lambda = rng.uniform(-5.0, 5.0);
    const NodeDisplacement scaled{1, lambda * a, lambda * b, lambda * c};
    CHECK(displacement_norm(scaled) ==
          doctest::Approx(std::abs(lambda) * displacement_norm(u))
              .epsilon(1e-12));

    const double d = rng.uniform(-10.0, 10.0);
    const double e = rng.uniform(-10.0, 10.0);
    const double f = rng.uniform(-10.0, 10.0);
    const NodeDisplacement v{2, d, e, f};
    const NodeDisplacement sum{3, a + d, b + e, c + f};
    CHECK(displacement_norm(sum) <=
          displacement_norm(u) + displacement_norm(v) + 1e-12);
  }
}

TEST_CASE("field_magnitudes composes the per-node norms in order") {
  const auto field = parse_text(
      "node_id,ux,uy,uz\n"
      "1,0,0,0\n"
      "2,1,-2,0.5\n"
      "3,0.1,0.1,0.1\n");
  const auto mags = field_magnitudes(field);
  REQUIRE(mags.values.size() == 3);
  CHECK(mags.values[0] == 0.0);
  CHECK(mags.values[1] == 3.5);
  CHECK(mags.values[2] == 0.1 + 0.1 + 0.1);
  CHECK(mags.v_min == 0.0);
  CHECK(mags.v_max == 3.5);
  CHECK(mags.zero_count == 1);

  for (std::size_t i = 0; i < field.nodes.size(); ++i) {
    CHECK(mags.values[i] == displacement_norm(field.nodes[i]));
  }
}

TEST_CASE("field_magnitudes on an all-zero field") {
  DisplacementField field;
  field.case_id = "zeros";
  field.nodes = {{1, 0, 0, 0}, {2, 0, 0, 0}, {3, 0, 0, 0}};
  const auto mags = field_magnitudes(field);
  CHECK(mags.v_min == 0.0);
  CHECK(mags.v_max == 0.0);
  CHECK(mags.zero_count == field.n_total());
}

TEST_CASE("zero fraction is consistent between ingest and histogram") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    SynthSpec spec;
    spec.n_nodes = 2000;
    spec.law = UniformLaw{0.0, 2.0};
    spec.zero_fraction = 0.15;
    spec.seed = seed;
    const auto field = generate_field(spec);
    const auto mags = field_magnitudes(field);
    const double expected =
        static_cast<double>(mags.zero_count) / field.n_total();
    for (ZeroPolicy policy : {ZeroPolicy::include, ZeroPolicy::exclude}) {
      const auto hist = build_histogram(mags, 350, policy);
      CHECK(hist.zero_fraction == expected);
    }
  }
}

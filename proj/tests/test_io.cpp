#include "doctest.h"
#include "latforge/gadgets.hpp"
#include "latforge/io.hpp"
#include "support.hpp"

using namespace latforge;

namespace {

const char* kSquare = R"({
  "lattice_D": {"elements": ["0", "m", "1"], "le": [["0", "m"], ["m", "1"]]},
  "partial_lattice": {
    "elements": ["0", "p", "q", "1"],
    "le": [["0", "p"], ["0", "q"], ["p", "1"], ["q", "1"]],
    "joins": [{"args": ["p", "q"], "value": "1"}],
    "meets": [{"args": ["p", "q"], "value": "0"}]
  },
  "phi": [
    ["p", "0", "m"], ["q", "0", "m"], ["1", "0", "m"],
    ["p", "q", "m"], ["q", "p", "m"], ["1", "p", "m"], ["1", "q", "m"]
  ]
})";

}  // namespace

TEST_CASE("parse: valid file, totality check, zero defaults") {
  MeasuredFile f = parse_measured_text(kSquare);
  CHECK(f.P.n() == 4);
  CHECK(f.D.size() == 3);
  // omitted comparable pairs default to 0 of D, i.e. the top of E
  CHECK(f.M.bv(f.P.poset.index_of("0"), f.P.poset.index_of("1")) == f.M.E.top());
  CHECK(f.M.bv(f.P.poset.index_of("1"), f.P.poset.index_of("0")) ==
        f.M.E.index_of("m"));

  // a required incomparable pair left out makes the table partial
  std::string broken = kSquare;
  size_t cut = broken.find(", [\"1\", \"q\", \"m\"]");
  REQUIRE(cut != std::string::npos);
  broken.erase(cut, std::string(", [\"1\", \"q\", \"m\"]").size());
  CHECK_THROWS_WITH_AS(parse_measured_text(broken), doctest::Contains("table not total"),
                       Error);
}

TEST_CASE("parse errors carry the ParseError kind") {
  CHECK_THROWS_WITH_AS(parse_measured_text("not json"), doctest::Contains("ParseError"),
                       Error);
  CHECK_THROWS_WITH_AS(parse_measured_text("{}"), doctest::Contains("ParseError"), Error);
}

TEST_CASE("serialize round trip is stable") {
  MeasuredFile f = parse_measured_text(kSquare);
  std::string once = serialize_measured(f);
  MeasuredFile g = parse_measured_text(once);
  std::string twice = serialize_measured(g);
  CHECK(once == twice);
  CHECK(g.P.n() == f.P.n());
  for (int a = 0; a < f.P.n(); ++a)
    for (int b = 0; b < f.P.n(); ++b) CHECK(f.M.bv(a, b) == g.M.bv(a, b));
}

TEST_CASE("random structures survive the round trip") {
  Rng rng(401);
  for (int trial = 0; trial < 10; ++trial) {
    PartialLattice p = random_partial_lattice(rng, 2 + int(rng() % 4));
    DistLattice d = random_dist_lattice(rng, 5);
    MeasuredFile f{d, p, random_measured(rng, p, d)};
    MeasuredFile g = parse_measured_text(serialize_measured(f));
    CHECK(g.P.joins == f.P.joins);
    CHECK(g.P.meets == f.P.meets);
    for (int a = 0; a < f.P.n(); ++a)
      for (int b = 0; b < f.P.n(); ++b) CHECK(f.M.bv(a, b) == g.M.bv(a, b));
  }
}

TEST_CASE("gadget output round-trips through the file format") {
  DistLattice d = as_dist_lattice(oracle::square_poset());
  Gadget g = persp_gadget(d, d.index_of("p"), d.index_of("q"), d.index_of("1"),
                          d.index_of("1"));
  MeasuredFile f{d, g.ambient.pl, g.ambient};
  std::string text = serialize_measured(f);
  MeasuredFile back = parse_measured_text(text);
  CHECK(back.P.n() == 7);
  CHECK(serialize_measured(back) == text);
  CHECK(con_lattice(back.P).size() == 10);
}

TEST_CASE("dot export lists covers only") {
  FinitePoset c3 = oracle::chain_poset(3);
  std::string dot = poset_dot(c3, "c3");
  CHECK(dot.find("n0 -> n1") != std::string::npos);
  CHECK(dot.find("n1 -> n2") != std::string::npos);
  CHECK(dot.find("n0 -> n2") == std::string::npos);
}

#include <doctest.h>

#include <random>
#include <set>

#include "multispec/errors.hpp"
#include "multispec/moment_engine.hpp"
#include "multispec/walk_oracle.hpp"
#include "support.hpp"

using namespace multispec;
using namespace multispec::testing;

namespace {

const char* const kLongWalk =
    "1_2,1_1,1_2,1_1,2_2,1_1,1_2,2_1,1_2,1_1,3_2,1_1,1_2,2_1,4_2,2_1,1_2,1_1,3_2,1_1,2_2,1_1,2_2,1_1,1_2,2_1,1_2";
const char* const kLongWalkLeft =
    "1_2,1_1,1_2,1_1,2_2,1_1,1_2,1_1,3_2,1_1,1_2,1_1,3_2,1_1,2_2,1_1,2_2,1_1,1_2";
// After minimization the right part's only component-1 vertex is 1_1.
const char* const kLongWalkRight = "1_2,1_1,1_2,1_1,2_2,1_1,1_2,1_1,1_2";

}  // namespace

TEST_CASE("labels") {
  CHECK(parse_vertex("1_2") == Vertex{1, 0});
  CHECK(parse_vertex("3_1") == Vertex{0, 2});
  CHECK(to_label(Vertex{2, 4}) == "5_3");
  CHECK_THROWS(parse_vertex("0_1"));
  CHECK_THROWS(parse_vertex("12"));
  CHECK(parse_walk("(1_1, 1_2, 1_1)").to_string() == "1_1,1_2,1_1");
  CHECK_THROWS(parse_walk("1_1,1_2"));
  CHECK_THROWS(parse_walk("1_1,1_1"));
}

TEST_CASE("minimality") {
  CHECK(is_minimal(parse_walk("1_2,1_1,1_2,1_3,2_2,2_3,1_2,2_1,3_2,1_1,1_2")));
  CHECK_FALSE(is_minimal(parse_walk("1_2,2_1,1_2")));
  CHECK(is_minimal(parse_walk("1_1,1_2,1_1")));
  const Walk m = minimize(parse_walk("3_2,2_1,3_2,4_1,3_2"));
  CHECK(m.to_string() == "1_2,1_1,1_2,2_1,1_2");
  CHECK(is_minimal(m));
}

TEST_CASE("skeleton and pass counts") {
  const Walk w = parse_walk("1_1,1_2,2_1,1_2,1_1");
  CHECK(w.length() == 4);
  CHECK(w.is_tree());
  CHECK(w.vertices().size() == 3);
  CHECK(w.vertices_in(0) == 2);
  CHECK(w.pass_counts().at(make_edge(parse_vertex("1_1"), parse_vertex("1_2"))) == 2);
  CHECK_FALSE(parse_walk("1_1,1_2,1_3,1_1").is_tree());
}

TEST_CASE("bipartite enumeration") {
  const EnsembleSpec spec = bipartite();
  const auto two = enumerate_essential_walks(spec, 2);
  REQUIRE(two.size() == 2);
  std::set<std::string> names;
  for (const auto& w : two) names.insert(w.to_string());
  CHECK(names == std::set<std::string>{"1_1,1_2,1_1", "1_2,1_1,1_2"});
  CHECK(enumerate_essential_walks(spec, 4).size() == 6);

  const auto zero = enumerate_essential_walks(path3(), 0);
  REQUIRE(zero.size() == 3);
  for (int j = 0; j < 3; ++j) CHECK(walk_weight(zero[j], path3()) == Rational(1, 3));

  CHECK_THROWS_AS(enumerate_essential_walks(spec, 3), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_essential_walks(spec, -2), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_essential_walks(spec, 14), GuardError);
  CHECK_NOTHROW(enumerate_essential_walks(spec, 14, 14));
  CHECK_THROWS_AS(enumerate_essential_walks(bipartite(Rational(1, 2), 1, ones(1)), 4), SpecError);
}

TEST_CASE("oracle moments") {
  const EnsembleSpec spec = bipartite();
  CHECK(oracle_moment(spec, 0) == 1);
  CHECK(oracle_moment(spec, 2) == Rational(1, 2));
  CHECK(oracle_moment(spec, 4) == 1);
  CHECK(oracle_moment(path3(3), 2) == Rational(4, 3));
}

TEST_CASE("walk weights") {
  const EnsembleSpec spec = bipartite();
  CHECK(walk_weight(parse_walk("1_1,1_2,1_1"), spec) == Rational(1, 4));

  const EnsembleSpec gauss = bipartite(Rational(1, 3), 2, double_factorials(4));
  // rho nu rho nu ... rho: one edge passed 2f times.
  CHECK(walk_weight(parse_walk("1_1,1_2,1_1,1_2,1_1,1_2,1_1"), gauss) ==
        Rational(1, 3) * Rational(2, 3) * 2 * 15);

  const EnsembleSpec doubled = bipartite(Rational(1, 3), 4, double_factorials(4));
  for (const Walk& w : enumerate_essential_walks(gauss, 6)) {
    const int edges = static_cast<int>(w.pass_counts().size());
    CHECK(walk_weight(w, doubled) == walk_weight(w, gauss) * pow(Rational(2), edges));
  }

  CHECK(walk_weight(parse_walk("1_1,2_1,1_1"), spec) == 0);
  CHECK_THROWS(walk_weight(parse_walk("1_1,1_2,1_1,1_2"), spec));
}

TEST_CASE("every enumerated walk is essential") {
  for (const EnsembleSpec& spec : {bipartite(), path3(2), star4(), triangle()}) {
    for (int len = 0; len <= 8; len += 2) {
      for (const Walk& w : enumerate_essential_walks(spec, len)) {
        CHECK(w.is_tree());
        CHECK(is_minimal(w));
        CHECK(walk_weight(w, spec) > 0);
        for (const auto& [edge, passes] : w.pass_counts()) CHECK(passes % 2 == 0);
      }
    }
  }
}

TEST_CASE("enumeration agrees with the recurrence cell by cell") {
  for (const EnsembleSpec& spec : {bipartite(Rational(1, 3), 2, double_factorials(8)), path3(), star4(2)}) {
    const WalkCensus census(spec, 4);
    const MomentTable s = compute_s_table(spec, 4);
    for (int j = 0; j < spec.kappa; ++j)
      for (int l = 0; l <= 4; ++l)
        for (int r = 0; r <= l; ++r) CHECK(census.all(j, l, r).weight == s.at(j, l, r));
  }
}

TEST_CASE("first-edge classification") {
  auto c = classify_first_edge(parse_walk("1_1,1_2,1_1,1_2,1_1"));
  CHECK(c.l == 2);
  CHECK(c.r == 2);
  CHECK(c.u == 0);
  CHECK(c.f == 2);
  CHECK(c.single_root_edge);

  c = classify_first_edge(parse_walk("1_1,1_2,2_1,1_2,1_1"));
  CHECK(c.l == 2);
  CHECK(c.r == 1);
  CHECK(c.u == 1);
  CHECK(c.f == 1);
  CHECK(c.nu_departures == 1);
  CHECK(c.second_component == 1);

  const Walk long_walk = parse_walk(kLongWalk);
  CHECK(long_walk.length() == 26);
  c = classify_first_edge(long_walk);
  CHECK(c.f == 4);
  CHECK(c.r == 7);
  CHECK(c.l == 13);
  CHECK_FALSE(c.single_root_edge);
  CHECK(split_first_edge(long_walk).code == std::vector<int>{1, 1, 0, 1, 0, 1, 0});

  CHECK_THROWS(classify_first_edge(enumerate_essential_walks(bipartite(), 0).front()));
}

TEST_CASE("split and gather on a long walk") {
  const Walk long_walk = parse_walk(kLongWalk);
  const FirstEdgeSplit parts = split_first_edge(long_walk);
  CHECK(parts.left.to_string() == kLongWalkLeft);
  CHECK(parts.right.to_string() == kLongWalkRight);

  const std::vector<int> code{1, 1, 0, 1, 0, 1, 0};
  CHECK(gather(parse_walk(kLongWalkLeft), parse_walk(kLongWalkRight), code) == long_walk);
  CHECK_THROWS(gather(parse_walk(kLongWalkLeft), parse_walk(kLongWalkRight), std::vector<int>{0, 1, 1, 1, 0, 1, 0}));
  CHECK_THROWS(gather(parse_walk(kLongWalkLeft), parse_walk(kLongWalkRight), std::vector<int>{1, 1, 0}));
}

TEST_CASE("gather inverts split on every enumerated walk") {
  for (const EnsembleSpec& spec : {bipartite(), path3(), star4()}) {
    for (int len = 2; len <= 8; len += 2) {
      for (const Walk& w : enumerate_essential_walks(spec, len)) {
        const FirstEdgeSplit parts = split_first_edge(w);
        CHECK(is_minimal(parts.left));
        CHECK(is_minimal(parts.right));
        CHECK(gather(parts.left, parts.right, parts.code) == w);
        CHECK(walk_weight(w, spec) * spec.alpha[w.root().component] ==
              walk_weight(parts.left, spec) * walk_weight(parts.right, spec));
      }
    }
  }
}

TEST_CASE("first splitting identity") {
  const EnsembleSpec spec = bipartite();
  auto one = verify_first_splitting(spec, 1, 1);
  CHECK(one.holds());
  REQUIRE(one.cells.size() == 2);
  CHECK(one.cells[0].enumerated == Rational(1, 4));

  auto two = verify_first_splitting(spec, 2, 2);
  CHECK(two.holds());
  CHECK(two.cells.size() == 4);

  for (int l = 1; l <= 4; ++l) {
    auto empty = verify_first_splitting(spec, l, 0);
    CHECK(empty.holds());
    for (const auto& cell : empty.cells) CHECK(cell.enumerated_count == 0);
  }

  for (const EnsembleSpec& s : {bipartite(Rational(1, 3), 2, double_factorials(8)), path3(), star4()}) {
    const WalkCensus census(s, 4);
    for (int l = 1; l <= 4; ++l) {
      for (int r = 0; r <= l; ++r) {
        const auto report = verify_first_splitting(census, l, r);
        CAPTURE(report.name);
        CHECK(report.holds());
        CHECK(report.unclassified == 0);
      }
    }
  }
}

TEST_CASE("second splitting identity") {
  const EnsembleSpec spec = bipartite(Rational(1, 3), 2, double_factorials(8));
  const auto base = verify_second_splitting(spec, 1, 0);
  CHECK(base.holds());
  const Rational a1(1, 3);
  const Rational a2(2, 3);
  // S_2^(1)(1,1) = alpha_1 p X_2 alpha_2.
  CHECK(base.cells.back().enumerated == base.cells.back().predicted);
  bool found = false;
  for (const auto& cell : base.cells) {
    if (cell.key == "j=1 S2(1,1)") {
      CHECK(cell.enumerated == a1 * 2 * a2);
      found = true;
    }
  }
  CHECK(found);

  for (const auto& cell : verify_second_splitting(spec, 2, 0).cells) {
    if (cell.key == "j=2 S2(2,2)") CHECK(cell.enumerated == a2 * 2 * 3 * a1);
  }

  for (const EnsembleSpec& s : {spec, path3(), star4(2)}) {
    const WalkCensus census(s, 4);
    for (int f = 1; f <= 4; ++f) {
      for (int u = 0; f + u <= 4; ++u) {
        const auto report = verify_second_splitting(census, f, u);
        CAPTURE(report.name);
        CHECK(report.holds());
        CHECK(report.unclassified == 0);
      }
    }
  }
}

TEST_CASE("an identity check detects a wrong prediction") {
  const WalkCensus census(bipartite(), 3);
  auto report = verify_first_splitting(census, 3, 2);
  REQUIRE(report.holds());
  report.cells.front().predicted += 1;
  CHECK_FALSE(report.holds());
  CHECK(report.first_failure() == &report.cells.front());
}

TEST_CASE("cluster counts") {
  CHECK(cluster_pass_count(1, std::vector<int>{1}) == 1);
  CHECK(cluster_pass_count(2, std::vector<int>{1}) == 2);
  CHECK(cluster_pass_count(1, std::vector<int>{1, 1}) == 1);
  CHECK(cluster_pass_count(3, std::vector<int>{}) == 1);
  CHECK(brute_force_cluster_count(1, std::vector<int>{1}) == 1);
  CHECK(brute_force_cluster_count(2, std::vector<int>{1}) == 2);
  CHECK(brute_force_cluster_count(1, std::vector<int>{2}) == 1);
  CHECK_THROWS_AS(brute_force_cluster_count(5, std::vector<int>{5}), GuardError);
}

TEST_CASE("closed-form cluster count matches brute force") {
  std::vector<int> list;
  std::function<void(int, int)> grow = [&](int j, int budget) {
    CAPTURE(j);
    CHECK(cluster_pass_count(j, list) == brute_force_cluster_count(j, list));
    for (int part = 1; part <= budget; ++part) {
      list.push_back(part);
      grow(j, budget - part);
      list.pop_back();
    }
  };
  for (int j = 1; j <= 8; ++j) grow(j, 8 - j);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "multispec/moment_engine.hpp"
#include "multispec/walk_oracle.hpp"
#include "support.hpp"

using namespace multispec;
using namespace multispec::testing;

TEST_CASE("binomial table") {
  BinomialTable c(10);
  CHECK(c(0, 0) == 1);
  CHECK(c(5, 2) == 10);
  CHECK(c(10, 5) == 252);
  CHECK(c(3, 4) == 0);
  CHECK(c(3, -1) == 0);
  CHECK_THROWS_AS(c(11, 1), std::out_of_range);
}

TEST_CASE("initial conditions") {
  const EnsembleSpec spec = path3(2);
  const MomentTable s = compute_s_table(spec, 4);
  for (int j = 0; j < 3; ++j) {
    CHECK(s.at(j, 0, 0) == spec.alpha[j]);
    for (int l = 1; l <= 4; ++l) CHECK(s.at(j, l, 0) == 0);
    CHECK(s.at(j, 2, 3) == 0);
    CHECK(s.at(j, -1, 0) == 0);
  }
}

TEST_CASE("bipartite hand values") {
  const MomentTable s = compute_s_table(bipartite(), 2);
  CHECK(s.at(0, 1, 1) == Rational(1, 4));
  // S(2,1) = p^2 X_2^2 a_j^2 a_i, S(2,2) = p^2 X_2^2 a_j a_i^2 + p X_4 a_j a_i.
  CHECK(s.at(0, 2, 1) == Rational(1, 8));
  CHECK(s.at(0, 2, 2) == Rational(3, 8));
  const LimitingMoments m = limiting_moments(s);
  CHECK(m.max_order() == 4);
  CHECK(m[0] == 1);
  CHECK(m[1] == 0);
  CHECK(m[2] == Rational(1, 2));
  CHECK(m[3] == 0);
  CHECK(m[4] == 1);
}

TEST_CASE("path spec with p = 3") {
  CHECK(limiting_moments(path3(3), 2)[2] == Rational(4, 3));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(compute_s_table(bipartite(Rational(1, 2), 1, ones(2)), 3), SpecError);
  CHECK_THROWS_AS(compute_s_table(bipartite(), -1), std::invalid_argument);
  const MomentTable s = compute_s_table(bipartite(), 2);
  CHECK_THROWS(limiting_moments(s, 5));
}

TEST_CASE("recurrence equals walk enumeration on random specs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    const EnsembleSpec spec = random_spec(rng, 4);
    const LimitingMoments m = limiting_moments(spec, 8);
    for (int t = 0; t <= 4; ++t) {
      CAPTURE(trial);
      CAPTURE(t);
      CHECK(m[2 * t] == oracle_moment(spec, 2 * t));
    }
  }
}

TEST_CASE("structural properties on random specs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const EnsembleSpec spec = random_spec(rng, 6);
    const MomentTable s = compute_s_table(spec, 6);
    for (int j = 0; j < spec.kappa; ++j)
      for (int l = 0; l <= 6; ++l)
        for (int r = 0; r <= l; ++r) CHECK(s.at(j, l, r) >= 0);
    const LimitingMoments m = limiting_moments(s);
    for (int t = 1; t <= 6; ++t) CHECK(m[2 * t - 1] == 0);

    EnsembleSpec denser = spec;
    denser.p = spec.p * Rational(3, 2);
    const LimitingMoments md = limiting_moments(denser, 12);
    for (int t = 1; t <= 6; ++t) CHECK(md[2 * t] > m[2 * t]);

    // a -> c a multiplies X_{2f} by c^{2f} and m_{2t} by c^{2t}.
    const Rational c(3, 2);
    EnsembleSpec scaled = spec;
    for (int f = 1; f <= 6; ++f) scaled.even_moments[f - 1] *= pow(c, 2 * f);
    const LimitingMoments ms = limiting_moments(scaled, 12);
    for (int t = 0; t <= 6; ++t) CHECK(ms[2 * t] == m[2 * t] * pow(c, 2 * t));
  }
}

TEST_CASE("carleman: bounded moments") {
  LimitingMoments m;
  for (int s = 0; s <= 16; ++s) m.values.push_back(s % 2 == 0 ? Rational(1) : Rational(0));
  const GrowthReport r = carleman_diagnostic(m, 8);
  CHECK(r.rows.size() == 8);
  CHECK(r.gamma == doctest::Approx(0.0).epsilon(1e-12));
  for (const auto& row : r.rows) CHECK(row.partial_sum == doctest::Approx(row.k));
  CHECK(r.consistent);
}

TEST_CASE("carleman: exact power law") {
  LimitingMoments m;
  for (int s = 0; s <= 16; ++s) {
    m.values.push_back(s % 2 == 0 ? Rational(pow(Rational(s / 2), s)) : Rational(0));
  }
  m.values[0] = 1;
  const GrowthReport r = carleman_diagnostic(m, 8);
  CHECK(r.gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.gamma_stderr < 1e-9);
  CHECK(r.consistent);
}

TEST_CASE("carleman: super-quadratic growth is flagged") {
  LimitingMoments m;
  for (int s = 0; s <= 16; ++s) {
    m.values.push_back(s % 2 == 0 ? Rational(pow(Rational(s / 2), 3 * s)) : Rational(0));
  }
  m.values[0] = 1;
  const GrowthReport r = carleman_diagnostic(m, 8);
  CHECK(r.gamma == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_FALSE(r.consistent);
}

TEST_CASE("carleman: bipartite regression baseline") {
  const GrowthReport r = carleman_diagnostic(limiting_moments(bipartite(), 16), 8);
  CHECK(r.gamma >= 0.0);
  CHECK(r.gamma <= 2.0);
  CHECK(r.gamma == doctest::Approx(0.39548001043129344).epsilon(1e-12));
  CHECK(r.consistent);
}

TEST_CASE("carleman: needs three even moments") {
  const LimitingMoments m = limiting_moments(bipartite(), 4);
  CHECK_THROWS(carleman_diagnostic(m, 2));
  CHECK_THROWS(carleman_diagnostic(m, 3));
}

#pragma once

#include <random>
#include <vector>

#include "multispec/ensemble.hpp"
#include "multispec/rational.hpp"

namespace multispec::testing {

inline std::vector<Rational> ones(int count) { return std::vector<Rational>(count, Rational(1)); }

inline std::vector<Rational> double_factorials(int count) {
  std::vector<Rational> out;
  Rational x = 1;
  for (int f = 1; f <= count; ++f) {
    x *= 2 * f - 1;
    out.push_back(x);
  }
  return out;
}

inline std::vector<std::vector<bool>> no_edges(int kappa) {
  return std::vector<std::vector<bool>>(kappa, std::vector<bool>(kappa, false));
}

inline EnsembleSpec make_spec(std::vector<Rational> alpha, std::vector<std::vector<bool>> gamma, Rational p,
                              std::vector<Rational> moments) {
  EnsembleSpec s;
  s.kappa = static_cast<int>(alpha.size());
  s.alpha = std::move(alpha);
  s.gamma = std::move(gamma);
  s.p = std::move(p);
  s.even_moments = std::move(moments);
  return validate_spec(std::move(s));
}

inline EnsembleSpec bipartite(Rational a1 = Rational(1, 2), Rational p = 1, std::vector<Rational> moments = ones(8)) {
  return make_spec({a1, 1 - a1}, {{false, true}, {true, false}}, std::move(p), std::move(moments));
}

inline EnsembleSpec path3(Rational p = 1, std::vector<Rational> moments = ones(8)) {
  auto g = no_edges(3);
  g[0][1] = g[1][0] = g[1][2] = g[2][1] = true;
  return make_spec({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, g, std::move(p), std::move(moments));
}

inline EnsembleSpec star4(Rational p = 1, std::vector<Rational> moments = ones(8)) {
  auto g = no_edges(4);
  for (int leaf = 1; leaf < 4; ++leaf) g[0][leaf] = g[leaf][0] = true;
  return make_spec(std::vector<Rational>(4, Rational(1, 4)), g, std::move(p), std::move(moments));
}

inline EnsembleSpec triangle(Rational p = 1, std::vector<Rational> moments = ones(8)) {
  auto g = no_edges(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g[a][b] = a != b;
  return make_spec({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, g, std::move(p), std::move(moments));
}

/// Connected Gamma (random spanning tree plus extra edges), random positive
/// rational alpha, p and even moments.
inline EnsembleSpec random_spec(std::mt19937_64& rng, int moment_count = 8) {
  std::uniform_int_distribution<int> kappa_dist(2, 4);
  std::uniform_int_distribution<int> small(1, 6);
  const int kappa = kappa_dist(rng);
  auto g = no_edges(kappa);
  for (int v = 1; v < kappa; ++v) {
    const int parent = std::uniform_int_distribution<int>(0, v - 1)(rng);
    g[v][parent] = g[parent][v] = true;
  }
  for (int a = 0; a < kappa; ++a) {
    for (int b = a + 1; b < kappa; ++b) {
      if (std::bernoulli_distribution(0.3)(rng)) g[a][b] = g[b][a] = true;
    }
  }
  std::vector<int> w(kappa);
  int total = 0;
  for (int& x : w) total += (x = small(rng));
  std::vector<Rational> alpha;
  for (int x : w) alpha.emplace_back(x, total);
  for (auto& a : alpha) a.canonicalize();
  Rational p(small(rng), std::uniform_int_distribution<int>(1, 3)(rng));
  p.canonicalize();
  std::vector<Rational> moments;
  Rational x = 1;
  for (int f = 1; f <= moment_count; ++f) {
    x *= Rational(small(rng), 2);
    x.canonicalize();
    moments.push_back(x);
  }
  return make_spec(alpha, g, p, moments);
}

}  // namespace multispec::testing

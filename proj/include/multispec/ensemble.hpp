#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "multispec/rational.hpp"

namespace multispec {

/// Parameters of a weighted multipartite sparse ensemble.
///
/// Components are indexed 0..kappa-1 internally. `even_moments[f-1]` holds
/// X_{2f}, the 2f-th moment of the weight law; X_0 = 1 is implicit.
struct EnsembleSpec {
  int kappa = 0;
  std::vector<Rational> alpha;
  std::vector<std::vector<bool>> gamma;
  Rational p;
  std::vector<Rational> even_moments;

  /// X_{2f}; f = 0 gives 1. Throws std::out_of_range past the stored moments.
  const Rational& even_moment(int f) const;
  /// Largest f with X_{2f} available.
  int max_moment_index() const { return static_cast<int>(even_moments.size()); }
  bool connected(int a, int b) const { return gamma[a][b]; }
};

enum class SpecErrorKind {
  Shape,
  SingleComponent,
  AlphaOutOfRange,
  AlphaSum,
  GammaAsymmetric,
  GammaDiagonal,
  GammaDisconnected,
  NonPositiveP,
  NegativeMoment,
  InsufficientMoments,
  TooFewVertices,
  ProbabilityAboveOne,
  LawMismatch,
  Malformed,
};

const char* to_string(SpecErrorKind kind);

class SpecError : public std::invalid_argument {
 public:
  SpecError(SpecErrorKind kind, const std::string& message);
  SpecErrorKind kind() const noexcept { return kind_; }

 private:
  SpecErrorKind kind_;
};

/// Returns `spec` unchanged if every ensemble invariant holds, otherwise
/// throws SpecError naming the first violated one.
EnsembleSpec validate_spec(EnsembleSpec spec);

/// Contiguous vertex blocks, one per component, in component order.
struct ComponentAssignment {
  int n = 0;
  std::vector<int> block_sizes;
  std::vector<int> block_start;     // first vertex of each block
  std::vector<int> component_of;    // size n, nondecreasing

  int block_end(int component) const { return block_start[component] + block_sizes[component]; }
};

/// Largest-remainder apportionment of alpha * n; ties in the fractional
/// remainder go to the lower component index.
ComponentAssignment assign_components(int n, const EnsembleSpec& spec);

}  // namespace multispec

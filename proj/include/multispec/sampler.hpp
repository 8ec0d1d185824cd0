#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multispec/ensemble.hpp"
#include "multispec/rational.hpp"

namespace multispec {

/// Built-in symmetric-or-two-point weight distributions with closed-form
/// even moments.
class WeightLaw {
 public:
  enum class Kind { Rademacher, UniformPm1, StandardGaussian, TwoPoint };

  static WeightLaw rademacher();
  static WeightLaw uniform_pm1();
  static WeightLaw standard_gaussian();
  /// +value with probability `prob`, -value otherwise.
  static WeightLaw two_point(Rational value, Rational prob);

  /// "rademacher", "uniform", "gaussian", or "two_point:<value>,<prob>".
  static WeightLaw parse(std::string_view name);

  Kind kind() const { return kind_; }
  std::string name() const;

  /// X_{2f}, exact.
  Rational even_moment(int f) const;
  std::vector<Rational> even_moments(int count) const;

  /// One draw from two independent 64-bit hashes.
  double draw(std::uint64_t h1, std::uint64_t h2) const;

 private:
  WeightLaw(Kind kind, Rational value, Rational prob);
  Kind kind_;
  Rational value_;
  Rational prob_;
  double value_d_;
  double prob_d_;
};

/// Throws SpecError(LawMismatch) unless spec.even_moments equals the law's
/// even moments entrywise.
void require_law_matches(const EnsembleSpec& spec, const WeightLaw& law);

struct MatrixEntry {
  int i = 0;  // 0-based, i < j
  int j = 0;
  double w = 0.0;
  bool operator==(const MatrixEntry&) const = default;
};

/// Symmetric zero-diagonal matrix stored as its strict upper triangle.
class WeightedSparseMatrix {
 public:
  /// Entries are sorted; throws std::invalid_argument on i >= j, indices out
  /// of range, or duplicate pairs.
  WeightedSparseMatrix(int n, std::vector<MatrixEntry> entries);

  int n() const { return n_; }
  std::span<const MatrixEntry> entries() const { return entries_; }

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Neighbours of `row` and their weights (both triangles).
  std::span<const int> row_columns(int row) const;
  std::span<const double> row_values(int row) const;

  /// Row-major n x n.
  std::vector<double> dense() const;

  /// Block-diagonal union; b's vertices are shifted by a.n().
  static WeightedSparseMatrix direct_sum(const WeightedSparseMatrix& a, const WeightedSparseMatrix& b);

  bool operator==(const WeightedSparseMatrix& other) const {
    return n_ == other.n_ && entries_ == other.entries_;
  }

 private:
  int n_;
  std::vector<MatrixEntry> entries_;
  std::vector<int> row_start_;
  std::vector<int> columns_;
  std::vector<double> values_;
};

/// One realization of the ensemble at size n. Pair (i, j) in a Gamma-allowed
/// block is kept with probability p/n and weighted from `law`; both choices
/// depend only on (seed, i, j).
WeightedSparseMatrix sample_matrix(const EnsembleSpec& spec, int n, const WeightLaw& law, std::uint64_t seed);

}  // namespace multispec

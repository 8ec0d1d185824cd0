#pragma once

#include <vector>

#include "multispec/ensemble.hpp"
#include "multispec/rational.hpp"

namespace multispec {

/// Exact binomial coefficients C(n, k) for 0 <= k <= n <= max_n.
class BinomialTable {
 public:
  explicit BinomialTable(int max_n);
  /// Zero outside 0 <= k <= n; throws std::out_of_range for n > max_n.
  const BigInt& operator()(int n, int k) const;
  int max_n() const { return max_n_; }

 private:
  int max_n_;
  std::vector<std::vector<BigInt>> rows_;
};

/// S^(j)(l, r): total weight of essential walks of length 2l rooted in
/// component j that leave the root exactly r times.
class MomentTable {
 public:
  MomentTable(int kappa, int t_max);

  int kappa() const { return kappa_; }
  int t_max() const { return t_max_; }

  /// Any index outside 0 <= r <= l <= t_max reads as zero.
  const Rational& at(int component, int l, int r) const;
  Rational& mutable_at(int component, int l, int r);

 private:
  std::size_t offset(int component, int l, int r) const;
  int kappa_;
  int t_max_;
  std::vector<Rational> cells_;
};

/// Fills S^(j)(l, r) for 0 <= r <= l <= t_max by increasing l, then r.
/// Requires X_2..X_{2 t_max}; throws SpecError(InsufficientMoments) otherwise
/// and std::invalid_argument for t_max < 0.
MomentTable compute_s_table(const EnsembleSpec& spec, int t_max);

/// Limiting moments m_0..m_{max_order}; odd entries are zero.
struct LimitingMoments {
  std::vector<Rational> values;

  int max_order() const { return static_cast<int>(values.size()) - 1; }
  const Rational& operator[](int s) const { return values.at(s); }
  std::vector<double> to_doubles() const;
};

/// m_{2t} = sum_j sum_{i<=t} S^(j)(t, i). max_order < 0 means 2 * t_max.
LimitingMoments limiting_moments(const MomentTable& table, int max_order = -1);

/// Convenience: compute_s_table + limiting_moments for orders 0..max_order.
LimitingMoments limiting_moments(const EnsembleSpec& spec, int max_order);

struct GrowthRow {
  int k = 0;
  double root = 0.0;         // m_{2k}^{1/(2k)}
  double partial_sum = 0.0;  // sum_{i<=k} m_{2i}^{-1/(2i)}
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  double gamma = 0.0;           // fitted exponent in m_{2k}^{1/2k} ~ c k^gamma
  double gamma_stderr = 0.0;
  double threshold = 2.0;
  bool degenerate = false;      // some m_{2k} == 0; the sum diverges trivially
  bool consistent = false;
};

/// Least-squares fit of log m_{2k}^{1/2k} against log k over 1 <= k <= k_range.
/// Consistent when gamma - gamma_stderr <= threshold. Needs k_range >= 3 and
/// moments through order 2 k_range.
GrowthReport carleman_diagnostic(const LimitingMoments& moments, int k_range);

}  // namespace multispec

#include "multispec/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "multispec/counter_rng.hpp"

namespace multispec {

WeightLaw::WeightLaw(Kind kind, Rational value, Rational prob)
    : kind_(kind),
      value_(std::move(value)),
      prob_(std::move(prob)),
      value_d_(to_double(value_)),
      prob_d_(to_double(prob_)) {}

WeightLaw WeightLaw::rademacher() { return WeightLaw(Kind::Rademacher, 1, Rational(1, 2)); }
WeightLaw WeightLaw::uniform_pm1() { return WeightLaw(Kind::UniformPm1, 1, 0); }
WeightLaw WeightLaw::standard_gaussian() { return WeightLaw(Kind::StandardGaussian, 1, 0); }

WeightLaw WeightLaw::two_point(Rational value, Rational prob) {
  if (prob < 0 || prob > 1) throw std::invalid_argument("two_point probability must lie in [0, 1]");
  return WeightLaw(Kind::TwoPoint, std::move(value), std::move(prob));
}

WeightLaw WeightLaw::parse(std::string_view name) {
  if (name == "rademacher") return rademacher();
  if (name == "uniform" || name == "uniform_pm1") return uniform_pm1();
  if (name == "gaussian" || name == "standard_gaussian") return standard_gaussian();
  constexpr std::string_view prefix = "two_point:";
  if (name.substr(0, prefix.size()) == prefix) {
    std::string_view args = name.substr(prefix.size());
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw std::invalid_argument("two_point needs '<value>,<prob>'");
    return two_point(parse_rational(args.substr(0, comma)), parse_rational(args.substr(comma + 1)));
  }
  throw std::invalid_argument("unknown weight law '" + std::string(name) +
                              "' (rademacher, uniform, gaussian, two_point:<value>,<prob>)");
}

std::string WeightLaw::name() const {
  switch (kind_) {
    case Kind::Rademacher: return "rademacher";
    case Kind::UniformPm1: return "uniform";
    case Kind::StandardGaussian: return "gaussian";
    case Kind::TwoPoint: return "two_point:" + to_fraction_string(value_) + "," + to_fraction_string(prob_);
  }
  return "unknown";
}

Rational WeightLaw::even_moment(int f) const {
  if (f < 0) throw std::invalid_argument("moment index must be non-negative");
  switch (kind_) {
    case Kind::Rademacher: return Rational(1);
    case Kind::UniformPm1: return Rational(1, 2 * f + 1);
    case Kind::StandardGaussian: {
      Rational r(1);
      for (int k = 2 * f - 1; k > 1; k -= 2) r *= k;
      return r;
    }
    case Kind::TwoPoint: return pow(value_, static_cast<unsigned>(2 * f));
  }
  return Rational(0);
}

std::vector<Rational> WeightLaw::even_moments(int count) const {
  std::vector<Rational> out;
  for (int f = 1; f <= count; ++f) out.push_back(even_moment(f));
  return out;
}

double WeightLaw::draw(std::uint64_t h1, std::uint64_t h2) const {
  switch (kind_) {
    case Kind::Rademacher: return (h1 >> 63) ? 1.0 : -1.0;
    case Kind::UniformPm1: return 2.0 * unit_interval(h1) - 1.0;
    case Kind::StandardGaussian: {
      const double radius = std::sqrt(-2.0 * std::log(open_unit_interval(h1)));
      return radius * std::cos(2.0 * std::numbers::pi * unit_interval(h2));
    }
    case Kind::TwoPoint: return unit_interval(h1) < prob_d_ ? value_d_ : -value_d_;
  }
  return 0.0;
}

void require_law_matches(const EnsembleSpec& spec, const WeightLaw& law) {
  for (int f = 1; f <= spec.max_moment_index(); ++f) {
    if (spec.even_moment(f) != law.even_moment(f)) {
      throw SpecError(SpecErrorKind::LawMismatch,
                      "spec X_" + std::to_string(2 * f) + " = " + to_fraction_string(spec.even_moment(f)) +
                          " but law '" + law.name() + "' has " + to_fraction_string(law.even_moment(f)));
    }
  }
}

WeightedSparseMatrix::WeightedSparseMatrix(int n, std::vector<MatrixEntry> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n < 0) throw std::invalid_argument("matrix size must be non-negative");
  std::sort(entries_.begin(), entries_.end(),
            [](const MatrixEntry& a, const MatrixEntry& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  std::vector<int> degree(n, 0);
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& m = entries_[e];
    if (m.i < 0 || m.j >= n || m.i >= m.j) {
      throw std::invalid_argument("entry (" + std::to_string(m.i) + ", " + std::to_string(m.j) +
                                  ") is not a strict upper-triangle position of a " + std::to_string(n) +
                                  "-vertex matrix");
    }
    if (e > 0 && entries_[e - 1].i == m.i && entries_[e - 1].j == m.j) {
      throw std::invalid_argument("duplicate entry (" + std::to_string(m.i) + ", " + std::to_string(m.j) + ")");
    }
    ++degree[m.i];
    ++degree[m.j];
  }
  row_start_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) row_start_[v + 1] = row_start_[v] + degree[v];
  columns_.resize(row_start_[n]);
  values_.resize(row_start_[n]);
  std::vector<int> fill(row_start_.begin(), row_start_.end() - 1);
  for (const auto& m : entries_) {
    columns_[fill[m.i]] = m.j;
    values_[fill[m.i]++] = m.w;
    columns_[fill[m.j]] = m.i;
    values_[fill[m.j]++] = m.w;
  }
}

void WeightedSparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_) {
    throw std::invalid_argument("vector size does not match matrix");
  }
  for (int row = 0; row < n_; ++row) {
    double acc = 0.0;
    for (int e = row_start_[row]; e < row_start_[row + 1]; ++e) acc += values_[e] * x[columns_[e]];
    y[row] = acc;
  }
}

std::span<const int> WeightedSparseMatrix::row_columns(int row) const {
  return std::span<const int>(columns_).subspan(row_start_[row], row_start_[row + 1] - row_start_[row]);
}

std::span<const double> WeightedSparseMatrix::row_values(int row) const {
  return std::span<const double>(values_).subspan(row_start_[row], row_start_[row + 1] - row_start_[row]);
}

std::vector<double> WeightedSparseMatrix::dense() const {
  std::vector<double> a(static_cast<std::size_t>(n_) * n_, 0.0);
  for (const auto& m : entries_) {
    a[static_cast<std::size_t>(m.i) * n_ + m.j] = m.w;
    a[static_cast<std::size_t>(m.j) * n_ + m.i] = m.w;
  }
  return a;
}

WeightedSparseMatrix WeightedSparseMatrix::direct_sum(const WeightedSparseMatrix& a, const WeightedSparseMatrix& b) {
  std::vector<MatrixEntry> entries(a.entries_.begin(), a.entries_.end());
  for (const auto& m : b.entries_) entries.push_back({m.i + a.n_, m.j + a.n_, m.w});
  return WeightedSparseMatrix(a.n_ + b.n_, std::move(entries));
}

WeightedSparseMatrix sample_matrix(const EnsembleSpec& spec, int n, const WeightLaw& law, std::uint64_t seed) {
  require_law_matches(spec, law);
  if (spec.p > n) {
    throw SpecError(SpecErrorKind::ProbabilityAboveOne,
                    "p = " + to_fraction_string(spec.p) + " exceeds n = " + std::to_string(n));
  }
  const ComponentAssignment blocks = assign_components(n, spec);
  const double keep = to_double(spec.p / n);

  std::vector<MatrixEntry> entries;
  for (int a = 0; a < spec.kappa; ++a) {
    for (int b = a + 1; b < spec.kappa; ++b) {
      if (!spec.connected(a, b)) continue;
      for (int i = blocks.block_start[a]; i < blocks.block_end(a); ++i) {
        for (int j = blocks.block_start[b]; j < blocks.block_end(b); ++j) {
          if (unit_interval(counter_hash(seed, i, j, streams::kEdge)) >= keep) continue;
          const double w = law.draw(counter_hash(seed, i, j, streams::kWeight),
                                    counter_hash(seed, i, j, streams::kWeightAux));
          entries.push_back({i, j, w});
        }
      }
    }
  }
  return WeightedSparseMatrix(n, std::move(entries));
}

}  // namespace multispec

#include "multispec/moment_engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace multispec {

BinomialTable::BinomialTable(int max_n) : max_n_(max_n) {
  if (max_n < 0) throw std::invalid_argument("binomial table size must be non-negative");
  rows_.resize(max_n + 1);
  for (int n = 0; n <= max_n; ++n) {
    rows_[n].resize(n + 1);
    rows_[n][0] = 1;
    rows_[n][n] = 1;
    for (int k = 1; k < n; ++k) rows_[n][k] = rows_[n - 1][k - 1] + rows_[n - 1][k];
  }
}

const BigInt& BinomialTable::operator()(int n, int k) const {
  static const BigInt zero(0);
  if (n > max_n_) throw std::out_of_range("binomial C(" + std::to_string(n) + ", .) beyond table");
  if (n < 0 || k < 0 || k > n) return zero;
  return rows_[n][k];
}

MomentTable::MomentTable(int kappa, int t_max) : kappa_(kappa), t_max_(t_max) {
  const int triangle = (t_max + 1) * (t_max + 2) / 2;
  cells_.assign(static_cast<std::size_t>(kappa) * triangle, Rational(0));
}

std::size_t MomentTable::offset(int component, int l, int r) const {
  const int triangle = (t_max_ + 1) * (t_max_ + 2) / 2;
  return static_cast<std::size_t>(component) * triangle + l * (l + 1) / 2 + r;
}

const Rational& MomentTable::at(int component, int l, int r) const {
  static const Rational zero(0);
  if (l < 0 || r < 0 || r > l || l > t_max_) return zero;
  return cells_[offset(component, l, r)];
}

Rational& MomentTable::mutable_at(int component, int l, int r) {
  if (l < 0 || r < 0 || r > l || l > t_max_) throw std::out_of_range("moment table index out of range");
  return cells_[offset(component, l, r)];
}

MomentTable compute_s_table(const EnsembleSpec& spec, int t_max) {
  if (t_max < 0) throw std::invalid_argument("t_max must be non-negative");
  if (spec.max_moment_index() < t_max) {
    throw SpecError(SpecErrorKind::InsufficientMoments,
                    "order " + std::to_string(2 * t_max) + " needs X_2..X_" + std::to_string(2 * t_max) +
                        ", spec provides " + std::to_string(spec.max_moment_index()) + " even moments");
  }
  const int k = spec.kappa;
  MomentTable table(k, t_max);
  const BinomialTable binom(2 * t_max);

  for (int j = 0; j < k; ++j) table.mutable_at(j, 0, 0) = spec.alpha[j];

  for (int l = 1; l <= t_max; ++l) {
    for (int r = 1; r <= l; ++r) {
      for (int j = 0; j < k; ++j) {
        Rational total(0);
        for (int f = 1; f <= r; ++f) {
          Rational per_f(0);
          for (int u = 0; u <= l - r; ++u) {
            const Rational& rest = table.at(j, l - u - f, r - f);
            if (sgn(rest) == 0) continue;
            // Weight of everything hanging below the second vertex.
            Rational subtree(0);
            for (int v = 0; v <= u; ++v) {
              Rational neighbours(0);
              for (int i = 0; i < k; ++i) {
                if (spec.connected(j, i)) neighbours += table.at(i, u, v);
              }
              subtree += Rational(binom(f + v - 1, f - 1)) * neighbours;
            }
            per_f += rest * subtree;
          }
          total += Rational(binom(r - 1, f - 1)) * spec.even_moment(f) * per_f;
        }
        table.mutable_at(j, l, r) = spec.p * total;
      }
    }
  }
  return table;
}

std::vector<double> LimitingMoments::to_doubles() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

LimitingMoments limiting_moments(const MomentTable& table, int max_order) {
  if (max_order < 0) max_order = 2 * table.t_max();
  if (max_order > 2 * table.t_max()) {
    throw std::out_of_range("order " + std::to_string(max_order) + " exceeds table range 2*t_max = " +
                            std::to_string(2 * table.t_max()));
  }
  LimitingMoments out;
  out.values.assign(max_order + 1, Rational(0));
  for (int s = 0; s <= max_order; s += 2) {
    const int t = s / 2;
    Rational sum(0);
    for (int j = 0; j < table.kappa(); ++j) {
      for (int i = 0; i <= t; ++i) sum += table.at(j, t, i);
    }
    out.values[s] = sum;
  }
  return out;
}

LimitingMoments limiting_moments(const EnsembleSpec& spec, int max_order) {
  if (max_order < 0) throw std::invalid_argument("order must be non-negative");
  return limiting_moments(compute_s_table(spec, max_order / 2), max_order);
}

GrowthReport carleman_diagnostic(const LimitingMoments& moments, int k_range) {
  if (k_range < 3) {
    throw std::invalid_argument("growth fit needs at least 3 even moments, got k_range = " +
                                std::to_string(k_range));
  }
  if (moments.max_order() < 2 * k_range) {
    throw std::out_of_range("growth fit over k <= " + std::to_string(k_range) + " needs moments through order " +
                            std::to_string(2 * k_range));
  }
  GrowthReport report;
  double partial = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int k = 1; k <= k_range; ++k) {
    const Rational& m = moments[2 * k];
    GrowthRow row;
    row.k = k;
    if (sgn(m) <= 0) {
      report.degenerate = true;
      row.root = 0.0;
      partial = INFINITY;
    } else {
      const double log_root = log_of(m) / (2.0 * k);
      row.root = std::exp(log_root);
      partial += std::exp(-log_root);
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(log_root);
    }
    row.partial_sum = partial;
    report.rows.push_back(row);
  }

  if (xs.size() >= 3) {
    const double count = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    report.gamma = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double resid = ys[i] - my - report.gamma * (xs[i] - mx);
      ssr += resid * resid;
    }
    report.gamma_stderr = std::sqrt(ssr / (count - 2.0) / sxx);
    report.consistent = report.degenerate || report.gamma - report.gamma_stderr <= report.threshold;
  } else {
    // Too few positive moments to fit; zero moments make the series diverge.
    report.gamma = NAN;
    report.gamma_stderr = NAN;
    report.consistent = report.degenerate;
  }
  return report;
}

}  // namespace multispec

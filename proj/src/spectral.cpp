#include "multispec/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "multispec/counter_rng.hpp"
#include "multispec/errors.hpp"

namespace multispec {

std::vector<double> empirical_moments_exact(const WeightedSparseMatrix& m, int k_max, int max_n) {
  if (k_max < 0) throw std::invalid_argument("k_max must be non-negative");
  const int n = m.n();
  if (n > max_n) {
    throw GuardError("exact trace needs n <= " + std::to_string(max_n) + ", got n = " + std::to_string(n));
  }
  std::vector<double> trace(k_max + 1, 0.0);
  if (n == 0) return trace;

  // Sparse propagation of e_i: only the k-neighbourhood of i is touched.
  std::vector<double> current(n, 0.0);
  std::vector<double> next(n, 0.0);
  std::vector<int> stamp(n, -1);
  std::vector<int> support;
  std::vector<int> next_support;
  int epoch = 0;
  for (int start = 0; start < n; ++start) {
    current[start] = 1.0;
    support.assign(1, start);
    for (int k = 1; k <= k_max; ++k) {
      ++epoch;
      next_support.clear();
      for (int row : support) {
        const double x = current[row];
        const auto cols = m.row_columns(row);
        const auto vals = m.row_values(row);
        for (std::size_t e = 0; e < cols.size(); ++e) {
          const int c = cols[e];
          if (stamp[c] != epoch) {
            stamp[c] = epoch;
            next[c] = 0.0;
            next_support.push_back(c);
          }
          next[c] += vals[e] * x;
        }
      }
      for (int row : support) current[row] = 0.0;
      std::swap(current, next);
      std::swap(support, next_support);
      // An index absent from the support holds exactly zero.
      if (stamp[start] == epoch) trace[k] += current[start];
      if (support.empty()) break;
    }
    for (int row : support) current[row] = 0.0;
  }
  std::vector<double> moments(k_max + 1);
  moments[0] = 1.0;
  for (int k = 1; k <= k_max; ++k) moments[k] = trace[k] / n;
  return moments;
}

std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n, double relative_tolerance, int max_sweeps) {
  if (static_cast<std::size_t>(n) * n != a.size()) throw std::invalid_argument("matrix is not n x n");
  auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };

  double total = 0.0;
  for (double x : a) total += x * x;
  const double threshold = relative_tolerance * std::sqrt(total);

  auto off_diagonal = [&] {
    double s = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (r != c) s += at(r, c) * at(r, c);
      }
    }
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_diagonal() > threshold) {
    if (++sweep > max_sweeps) {
      throw ConvergenceError("Jacobi eigensolver did not converge in " + std::to_string(max_sweeps) + " sweeps");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = at(k, p);
          const double akq = at(k, q);
          if (akp == 0.0 && akq == 0.0) continue;
          at(k, p) = at(p, k) = c * akp - s * akq;
          at(k, q) = at(q, k) = s * akp + c * akq;
        }
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = at(q, p) = 0.0;
      }
    }
  }

  std::vector<double> eigenvalues(n);
  for (int i = 0; i < n; ++i) eigenvalues[i] = at(i, i);
  std::sort(eigenvalues.begin(), eigenvalues.end());
  return eigenvalues;
}

EigenMoments empirical_moments_eigen(const WeightedSparseMatrix& m, int k_max, int max_n) {
  if (k_max < 0) throw std::invalid_argument("k_max must be non-negative");
  if (m.n() > max_n) {
    throw GuardError("dense eigendecomposition needs n <= " + std::to_string(max_n) + ", got n = " +
                     std::to_string(m.n()));
  }
  EigenMoments out;
  out.eigenvalues = jacobi_eigenvalues(m.dense(), m.n());
  out.moments.assign(k_max + 1, 0.0);
  out.moments[0] = 1.0;
  if (m.n() == 0) return out;
  for (int k = 1; k <= k_max; ++k) {
    double sum = 0.0;
    for (double lambda : out.eigenvalues) sum += std::pow(lambda, k);
    out.moments[k] = sum / m.n();
  }
  return out;
}

std::string to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::ExactTrace: return "exact-trace";
    case MomentMethod::Eigen: return "eigen";
    case MomentMethod::Hutchinson: return "hutchinson";
  }
  return "unknown";
}

MomentMethod parse_moment_method(const std::string& name) {
  if (name == "exact" || name == "exact-trace") return MomentMethod::ExactTrace;
  if (name == "eigen") return MomentMethod::Eigen;
  if (name == "hutchinson") return MomentMethod::Hutchinson;
  throw std::invalid_argument("unknown moment method '" + name + "' (exact, eigen, hutchinson)");
}

MomentEstimate summarize(const std::vector<std::vector<double>>& replicates, int k_max) {
  MomentEstimate est;
  est.k_max = k_max;
  est.trials = static_cast<int>(replicates.size());
  est.mean.assign(k_max + 1, 0.0);
  est.sd.assign(k_max + 1, 0.0);
  est.standard_error.assign(k_max + 1, 0.0);
  if (replicates.empty()) return est;
  const double count = static_cast<double>(replicates.size());
  for (int k = 0; k <= k_max; ++k) {
    double sum = 0.0;
    for (const auto& row : replicates) sum += row.at(k);
    const double mean = sum / count;
    double squares = 0.0;
    for (const auto& row : replicates) squares += (row[k] - mean) * (row[k] - mean);
    est.mean[k] = mean;
    if (replicates.size() > 1) {
      est.sd[k] = std::sqrt(squares / (count - 1.0));
      est.standard_error[k] = est.sd[k] / std::sqrt(count);
    }
  }
  return est;
}

MomentEstimate empirical_moments_hutchinson(const WeightedSparseMatrix& m, int k_max, int probes,
                                            std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("Hutchinson estimation needs at least one probe");
  if (k_max < 0) throw std::invalid_argument("k_max must be non-negative");
  const int n = m.n();
  std::vector<std::vector<double>> replicates;
  replicates.reserve(probes);
  std::vector<double> z(n);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (int probe = 0; probe < probes; ++probe) {
    for (int i = 0; i < n; ++i) z[i] = (counter_hash(seed, probe, i, streams::kProbe) >> 63) ? 1.0 : -1.0;
    std::vector<double> row(k_max + 1, 0.0);
    row[0] = 1.0;
    x = z;
    for (int k = 1; k <= k_max; ++k) {
      m.multiply(x, y);
      std::swap(x, y);
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += z[i] * x[i];
      row[k] = n > 0 ? dot / n : 0.0;
    }
    replicates.push_back(std::move(row));
  }
  MomentEstimate est = summarize(replicates, k_max);
  est.n = n;
  est.seed = seed;
  est.method = MomentMethod::Hutchinson;
  est.probes = probes;
  return est;
}

}  // namespace multispec

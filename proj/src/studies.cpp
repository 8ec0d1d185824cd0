#include "multispec/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "multispec/counter_rng.hpp"
#include "multispec/moment_engine.hpp"
#include "multispec/parallel.hpp"

namespace multispec {

std::vector<std::vector<double>> sample_trial_moments(const EnsembleSpec& spec, const WeightLaw& law, int n,
                                                      int k_max, int trials, std::uint64_t seed,
                                                      const StudyOptions& options) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  require_law_matches(spec, law);
  std::vector<std::vector<double>> rows(trials);
  parallel_for(static_cast<std::size_t>(trials), options.threads, [&](std::size_t t) {
    const std::uint64_t s = trial_seed(seed, static_cast<std::uint64_t>(n), t);
    const WeightedSparseMatrix a = sample_matrix(spec, n, law, s);
    switch (options.method) {
      case MomentMethod::ExactTrace:
        rows[t] = empirical_moments_exact(a, k_max, options.exact_limit);
        break;
      case MomentMethod::Eigen:
        rows[t] = empirical_moments_eigen(a, k_max, options.eigen_limit).moments;
        break;
      case MomentMethod::Hutchinson:
        rows[t] = empirical_moments_hutchinson(a, k_max, options.probes, s).mean;
        break;
    }
  });
  return rows;
}

std::vector<ConvergenceRow> moment_convergence_study(const EnsembleSpec& spec, const WeightLaw& law,
                                                     const std::vector<int>& n_list, int k_max, int trials,
                                                     std::uint64_t seed, const StudyOptions& options) {
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  const LimitingMoments limits = limiting_moments(spec, k_max);
  std::vector<ConvergenceRow> rows;
  for (int n : n_list) {
    const MomentEstimate est = summarize(sample_trial_moments(spec, law, n, k_max, trials, seed, options), k_max);
    for (int k = 1; k <= k_max; ++k) {
      ConvergenceRow row;
      row.n = n;
      row.k = k;
      row.mean = est.mean[k];
      row.standard_error = est.standard_error[k];
      row.limit = limits[k];
      row.delta = std::fabs(row.mean - to_double(row.limit));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

CorrelatorEstimate covariance_with_jackknife(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("covariance inputs differ in length");
  const std::size_t count = x.size();
  if (count < 2) throw std::invalid_argument("covariance needs at least 2 samples");
  CorrelatorEstimate out;
  out.trials = static_cast<int>(count);

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  // Centered sums; the covariance is shift invariant.
  std::vector<double> dx(count);
  std::vector<double> dy(count);
  double sx = 0.0;
  double sy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    dx[i] = x[i] - mx;
    dy[i] = y[i] - my;
    sx += dx[i];
    sy += dy[i];
    sxy += dx[i] * dy[i];
  }
  const double c = static_cast<double>(count);
  out.value = (sxy - sx * sy / c) / (c - 1.0);

  if (count < 3) {
    out.standard_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  std::vector<double> leave_out(count);
  double mean_leave_out = 0.0;
  const double c1 = c - 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double rx = sx - dx[i];
    const double ry = sy - dy[i];
    const double rxy = sxy - dx[i] * dy[i];
    leave_out[i] = (rxy - rx * ry / c1) / (c1 - 1.0);
    mean_leave_out += leave_out[i];
  }
  mean_leave_out /= c;
  double spread = 0.0;
  for (double v : leave_out) spread += (v - mean_leave_out) * (v - mean_leave_out);
  out.standard_error = std::sqrt((c - 1.0) / c * spread);
  return out;
}

CorrelatorEstimate correlator_estimate(const EnsembleSpec& spec, const WeightLaw& law, int n, int k, int m,
                                       int trials, std::uint64_t seed, const StudyOptions& options) {
  if (trials < 2) throw std::invalid_argument("correlator needs at least 2 trials");
  if (k < 1 || m < 1) throw std::invalid_argument("moment orders must be positive");
  const int k_max = std::max(k, m);
  const auto rows = sample_trial_moments(spec, law, n, k_max, trials, seed, options);
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(rows.size());
  y.reserve(rows.size());
  for (const auto& row : rows) {
    x.push_back(row[k]);
    y.push_back(row[m]);
  }
  CorrelatorEstimate out = covariance_with_jackknife(x, y);
  out.n = n;
  out.k = k;
  out.m = m;
  return out;
}

}  // namespace multispec

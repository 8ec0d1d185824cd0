#pragma once

#include <cstdint>
#include <vector>

#include "multispec/ensemble.hpp"
#include "multispec/rational.hpp"
#include "multispec/sampler.hpp"
#include "multispec/spectral.hpp"

namespace multispec {

struct StudyOptions {
  MomentMethod method = MomentMethod::ExactTrace;
  int probes = 64;        // Hutchinson only
  int threads = 0;        // <= 0: MULTISPEC_THREADS / hardware
  int exact_limit = kExactTraceLimit;
  int eigen_limit = kDenseEigenLimit;
};

/// Empirical moments M_0..M_{k_max} of `trials` independent realizations at
/// size n; row t uses seed trial_seed(seed, n, t). Rows come back in trial
/// order whatever the thread count.
std::vector<std::vector<double>> sample_trial_moments(const EnsembleSpec& spec, const WeightLaw& law, int n,
                                                      int k_max, int trials, std::uint64_t seed,
                                                      const StudyOptions& options = {});

struct ConvergenceRow {
  int n = 0;
  int k = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  Rational limit{0};
  double delta = 0.0;  // |mean - limit|
};

/// Rows sorted by n (as given), then k = 1..k_max.
std::vector<ConvergenceRow> moment_convergence_study(const EnsembleSpec& spec, const WeightLaw& law,
                                                     const std::vector<int>& n_list, int k_max, int trials,
                                                     std::uint64_t seed, const StudyOptions& options = {});

struct CorrelatorEstimate {
  int n = 0;
  int k = 0;
  int m = 0;
  int trials = 0;
  double value = 0.0;           // unbiased sample covariance of (M_k, M_m)
  double standard_error = 0.0;  // jackknife
  double scaled() const { return n * value; }
  double scaled_error() const { return n * standard_error; }
};

/// Covariance of x and y with the n-1 denominator and its leave-one-out
/// jackknife standard error. Needs at least 2 samples (3 for the error).
CorrelatorEstimate covariance_with_jackknife(const std::vector<double>& x, const std::vector<double>& y);

CorrelatorEstimate correlator_estimate(const EnsembleSpec& spec, const WeightLaw& law, int n, int k, int m,
                                       int trials, std::uint64_t seed, const StudyOptions& options = {});

}  // namespace multispec

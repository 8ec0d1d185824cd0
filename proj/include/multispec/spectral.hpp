#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "multispec/sampler.hpp"

namespace multispec {

class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& message) : std::runtime_error(message) {}
};

inline constexpr int kExactTraceLimit = 4096;
inline constexpr int kDenseEigenLimit = 2048;

/// M_k = Tr(A^k) / n for k = 0..k_max (M_0 = 1), from the diagonal of A^k
/// obtained by propagating each basis vector through the sparse matrix.
/// Throws GuardError for n > max_n.
std::vector<double> empirical_moments_exact(const WeightedSparseMatrix& m, int k_max,
                                            int max_n = kExactTraceLimit);

/// Eigenvalues of a dense symmetric row-major matrix by cyclic Jacobi
/// rotations, ascending. Stops once the off-diagonal Frobenius norm is at
/// most `relative_tolerance` times the full Frobenius norm.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n, double relative_tolerance = 1e-10,
                                       int max_sweeps = 100);

struct EigenMoments {
  std::vector<double> eigenvalues;  // ascending; the counting function's jumps
  std::vector<double> moments;      // M_0..M_{k_max}
};

EigenMoments empirical_moments_eigen(const WeightedSparseMatrix& m, int k_max, int max_n = kDenseEigenLimit);

enum class MomentMethod { ExactTrace, Eigen, Hutchinson };
std::string to_string(MomentMethod method);
MomentMethod parse_moment_method(const std::string& name);

/// Sample statistics of M_k over independent replicates (trials or probes).
struct MomentEstimate {
  int n = 0;
  int k_max = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  MomentMethod method = MomentMethod::ExactTrace;
  int probes = 0;
  std::vector<double> mean;    // index k = 0..k_max
  std::vector<double> sd;
  std::vector<double> standard_error;
};

/// Summary of replicate rows, each sized k_max + 1; sd uses the n-1
/// denominator and standard_error = sd / sqrt(replicates).
MomentEstimate summarize(const std::vector<std::vector<double>>& replicates, int k_max);

/// Tr(A^k)/n estimated from `probes` Rademacher vectors z as z^T A^k z / n.
/// `trials` in the result counts probes.
MomentEstimate empirical_moments_hutchinson(const WeightedSparseMatrix& m, int k_max, int probes,
                                            std::uint64_t seed);

}  // namespace multispec

#include "multispec/ensemble.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace multispec {

const Rational& EnsembleSpec::even_moment(int f) const {
  static const Rational one(1);
  if (f == 0) return one;
  if (f < 0 || f > max_moment_index()) {
    throw std::out_of_range("even moment X_" + std::to_string(2 * f) + " not available");
  }
  return even_moments[f - 1];
}

const char* to_string(SpecErrorKind kind) {
  switch (kind) {
    case SpecErrorKind::Shape: return "shape";
    case SpecErrorKind::SingleComponent: return "single-component";
    case SpecErrorKind::AlphaOutOfRange: return "alpha-out-of-range";
    case SpecErrorKind::AlphaSum: return "alpha-sum";
    case SpecErrorKind::GammaAsymmetric: return "gamma-asymmetric";
    case SpecErrorKind::GammaDiagonal: return "gamma-diagonal";
    case SpecErrorKind::GammaDisconnected: return "gamma-disconnected";
    case SpecErrorKind::NonPositiveP: return "non-positive-p";
    case SpecErrorKind::NegativeMoment: return "negative-moment";
    case SpecErrorKind::InsufficientMoments: return "insufficient-moments";
    case SpecErrorKind::TooFewVertices: return "too-few-vertices";
    case SpecErrorKind::ProbabilityAboveOne: return "probability-above-one";
    case SpecErrorKind::LawMismatch: return "law-mismatch";
    case SpecErrorKind::Malformed: return "malformed";
  }
  return "unknown";
}

SpecError::SpecError(SpecErrorKind kind, const std::string& message)
    : std::invalid_argument(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {

bool gamma_connected(const std::vector<std::vector<bool>>& gamma) {
  const int k = static_cast<int>(gamma.size());
  std::vector<bool> seen(k, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int a = frontier.front();
    frontier.pop();
    for (int b = 0; b < k; ++b) {
      if (gamma[a][b] && !seen[b]) {
        seen[b] = true;
        ++reached;
        frontier.push(b);
      }
    }
  }
  return reached == k;
}

}  // namespace

EnsembleSpec validate_spec(EnsembleSpec spec) {
  const int k = spec.kappa;
  if (k < 1) throw SpecError(SpecErrorKind::Shape, "kappa must be positive");
  if (static_cast<int>(spec.alpha.size()) != k) {
    throw SpecError(SpecErrorKind::Shape, "alpha has " + std::to_string(spec.alpha.size()) +
                                              " entries, expected kappa = " + std::to_string(k));
  }
  if (static_cast<int>(spec.gamma.size()) != k ||
      std::any_of(spec.gamma.begin(), spec.gamma.end(),
                  [k](const auto& row) { return static_cast<int>(row.size()) != k; })) {
    throw SpecError(SpecErrorKind::Shape, "gamma must be a kappa x kappa matrix");
  }
  if (k == 1) {
    throw SpecError(SpecErrorKind::SingleComponent,
                    "kappa = 1 gives the empty matrix (gamma has no loops); nothing to compute");
  }
  for (int i = 0; i < k; ++i) {
    if (spec.alpha[i] <= 0 || spec.alpha[i] >= 1) {
      throw SpecError(SpecErrorKind::AlphaOutOfRange,
                      "alpha_" + std::to_string(i + 1) + " = " + to_fraction_string(spec.alpha[i]) +
                          " is not in (0,1)");
    }
  }
  const Rational total = std::accumulate(spec.alpha.begin(), spec.alpha.end(), Rational(0));
  if (total != 1) {
    throw SpecError(SpecErrorKind::AlphaSum, "alpha sums to " + to_fraction_string(total) + ", not 1");
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (spec.gamma[i][j] != spec.gamma[j][i]) {
        throw SpecError(SpecErrorKind::GammaAsymmetric,
                        "gamma[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                            "] differs from its transpose");
      }
    }
    if (spec.gamma[i][i]) {
      throw SpecError(SpecErrorKind::GammaDiagonal,
                      "gamma[" + std::to_string(i + 1) + "][" + std::to_string(i + 1) + "] must be 0");
    }
  }
  if (!gamma_connected(spec.gamma)) {
    throw SpecError(SpecErrorKind::GammaDisconnected, "gamma is not a connected graph");
  }
  if (spec.p <= 0) {
    throw SpecError(SpecErrorKind::NonPositiveP, "p = " + to_fraction_string(spec.p) + " must be positive");
  }
  for (std::size_t f = 0; f < spec.even_moments.size(); ++f) {
    if (spec.even_moments[f] < 0) {
      throw SpecError(SpecErrorKind::NegativeMoment,
                      "X_" + std::to_string(2 * (f + 1)) + " = " +
                          to_fraction_string(spec.even_moments[f]) + " is negative");
    }
  }
  return spec;
}

ComponentAssignment assign_components(int n, const EnsembleSpec& spec) {
  const int k = spec.kappa;
  if (n < k) {
    throw SpecError(SpecErrorKind::TooFewVertices,
                    "n = " + std::to_string(n) + " is smaller than kappa = " + std::to_string(k));
  }
  ComponentAssignment out;
  out.n = n;
  out.block_sizes.resize(k);

  std::vector<Rational> remainder(k);
  int assigned = 0;
  for (int i = 0; i < k; ++i) {
    const Rational quota = spec.alpha[i] * n;
    BigInt floor_q;
    mpz_fdiv_q(floor_q.get_mpz_t(), quota.get_num_mpz_t(), quota.get_den_mpz_t());
    out.block_sizes[i] = static_cast<int>(floor_q.get_si());
    remainder[i] = quota - Rational(floor_q);
    assigned += out.block_sizes[i];
  }

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (int s = 0; s < n - assigned; ++s) ++out.block_sizes[order[s % k]];

  for (int i = 0; i < k; ++i) {
    if (out.block_sizes[i] == 0) {
      throw SpecError(SpecErrorKind::TooFewVertices,
                      "n = " + std::to_string(n) + " leaves component " + std::to_string(i + 1) + " empty");
    }
  }

  out.block_start.resize(k);
  out.component_of.reserve(n);
  int start = 0;
  for (int i = 0; i < k; ++i) {
    out.block_start[i] = start;
    out.component_of.insert(out.component_of.end(), out.block_sizes[i], i);
    start += out.block_sizes[i];
  }
  return out;
}

}  // namespace multispec

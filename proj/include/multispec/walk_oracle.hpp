#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "multispec/ensemble.hpp"
#include "multispec/rational.hpp"

namespace multispec {

/// A relabeled vertex: local index within its component. Both fields are
/// 0-based; the text label "a_b" is (index + 1)_(component + 1).
struct Vertex {
  int component = 0;
  int index = 0;
  auto operator<=>(const Vertex&) const = default;
};

std::string to_label(const Vertex& v);
Vertex parse_vertex(std::string_view label);

/// Unordered pair, stored with first <= second.
using Edge = std::pair<Vertex, Vertex>;
Edge make_edge(const Vertex& a, const Vertex& b);

/// A closed walk w_1 .. w_k, w_{k+1} = w_1 with its skeleton.
class Walk {
 public:
  /// `steps` includes the closing vertex. Throws std::invalid_argument if
  /// empty, not closed, or containing a self-step.
  explicit Walk(std::vector<Vertex> steps);

  const std::vector<Vertex>& steps() const { return steps_; }
  int length() const { return static_cast<int>(steps_.size()) - 1; }
  const Vertex& root() const { return steps_.front(); }
  /// Skeleton vertices in order of first visit.
  const std::vector<Vertex>& vertices() const { return vertices_; }
  /// n_w(e) for every skeleton edge.
  const std::map<Edge, int>& pass_counts() const { return passes_; }
  bool is_tree() const { return vertices_.size() == passes_.size() + 1; }
  int vertices_in(int component) const;
  /// Comma-separated labels, e.g. "1_2,1_1,1_2".
  std::string to_string() const;

  bool operator==(const Walk& other) const { return steps_ == other.steps_; }

 private:
  std::vector<Vertex> steps_;
  std::vector<Vertex> vertices_;
  std::map<Edge, int> passes_;
};

Walk parse_walk(std::string_view labels);

/// True iff every newly visited vertex is the smallest unused index of its
/// component at that moment.
bool is_minimal(const Walk& walk);

/// Canonical minimal representative of the walk's equivalence class.
Walk minimize(const Walk& walk);

inline constexpr int kDefaultMaxWalkLength = 12;

/// All essential walks of the given even length (minimal, tree skeleton,
/// positive weight), in depth-first order, roots ordered by component.
/// Length 0 yields one single-vertex walk per component. Throws
/// std::invalid_argument for odd or negative length, GuardError above
/// `max_length`, SpecError(InsufficientMoments) when X_{length} is missing.
std::vector<Walk> enumerate_essential_walks(const EnsembleSpec& spec, int length,
                                            int max_length = kDefaultMaxWalkLength);

/// theta(w) = prod_j alpha_j^{|V_j|} * prod_e p X_{n_w(e)}, or 0 if a step
/// is not allowed by gamma. The walk must have a tree skeleton with even
/// pass counts.
Rational walk_weight(const Walk& walk, const EnsembleSpec& spec);

/// Sum of walk_weight over enumerate_essential_walks(spec, order).
Rational oracle_moment(const EnsembleSpec& spec, int order, int max_length = kDefaultMaxWalkLength);

/// Parameters of the first-edge decomposition of an essential walk with
/// root rho = w_1 and second vertex nu = w_2.
struct WalkClassification {
  int l = 0;                  // half length
  int r = 0;                  // departures from rho
  int u = 0;                  // half length over the subtree hanging from nu
  int f = 0;                  // steps rho -> nu
  int root_component = 0;     // j
  int second_component = 0;   // i
  int nu_departures = 0;      // v: steps leaving nu, excluding nu -> rho
  bool single_root_edge = false;
};

WalkClassification classify_first_edge(const Walk& walk);

/// Left part (the edge rho-nu plus the subtree below nu), right part (the
/// rest), and the departure code: one symbol per departure from rho, 1 when
/// the step goes to nu. Both parts are minimized.
struct FirstEdgeSplit {
  Walk left;
  Walk right;
  std::vector<int> code;
};

FirstEdgeSplit split_first_edge(const Walk& walk);

/// Inverse of split_first_edge. `left` must have a single edge at its root,
/// `code` must start with 1 and contain one symbol per root departure.
Walk gather(const Walk& left, const Walk& right, std::span<const int> code);

/// Enumerated totals and counts of essential walks grouped by root component,
/// half length and root departures, for all half lengths up to a bound.
class WalkCensus {
 public:
  struct Tally {
    Rational weight{0};
    std::size_t count = 0;
  };

  WalkCensus(const EnsembleSpec& spec, int max_half_length);

  const EnsembleSpec& spec() const { return spec_; }
  int max_half_length() const { return max_half_length_; }

  /// S^(j)(l, r) and |Lambda^(j)(l, r)|.
  const Tally& all(int j, int l, int r) const;
  /// S_2^(j)(l, r): walks whose skeleton has a single edge at the root.
  const Tally& single_root_edge(int j, int l, int r) const;

  struct Entry {
    Walk walk;
    WalkClassification shape;
    Rational weight;
  };
  const std::vector<Entry>& walks(int l) const { return walks_.at(l); }

 private:
  EnsembleSpec spec_;
  int max_half_length_;
  std::vector<std::vector<Entry>> walks_;
  std::map<std::tuple<int, int, int>, Tally> all_;
  std::map<std::tuple<int, int, int>, Tally> single_;
};

/// One cell of an identity check: enumerated total vs. the value predicted
/// by the decomposition, plus the matching cardinalities.
struct IdentityCell {
  std::string key;
  Rational enumerated{0};
  Rational predicted{0};
  std::size_t enumerated_count = 0;
  BigInt predicted_count{0};

  bool holds() const { return enumerated == predicted && BigInt(enumerated_count) == predicted_count; }
};

struct IdentityReport {
  std::string name;
  std::vector<IdentityCell> cells;
  std::size_t unclassified = 0;  // walks that fell outside every cell

  bool holds() const;
  const IdentityCell* first_failure() const;
};

/// Checks, for every root component j and 1 <= f <= r, 0 <= u <= l - r, that
/// the enumerated weight of walks with that (u, f) equals
/// alpha_j^{-1} C(r-1, f-1) S_2^(j)(f+u, f) S^(j)(l-u-f, r-f), all by enumeration.
IdentityReport verify_first_splitting(const WalkCensus& census, int l, int r);
IdentityReport verify_first_splitting(const EnsembleSpec& spec, int l, int r);

/// Checks S_3^(j,i)(f+u, f, v) = alpha_j C(f+v-1, f-1) p X_{2f} Gamma_ji S^(i)(u, v)
/// for every (j, i, v), and the aggregated S_2^(j)(f+u, f) per root component.
IdentityReport verify_second_splitting(const WalkCensus& census, int f, int u);
IdentityReport verify_second_splitting(const EnsembleSpec& spec, int f, int u);

/// Closed-form number of departure orderings covering an ordered cluster
/// with pass counts 2j, 2 i_1, ..., 2 i_l.
BigInt cluster_pass_count(int j, std::span<const int> i_list);

inline constexpr int kMaxBruteForceCluster = 8;

/// The same count by listing every departure sequence from the cluster
/// center: j departures along the entry edge (the last departure among them)
/// and i_r along edge r, with edges first used in order 1..l.
/// Throws GuardError when j + sum(i_list) exceeds `limit`.
BigInt brute_force_cluster_count(int j, std::span<const int> i_list, int limit = kMaxBruteForceCluster);

}  // namespace multispec

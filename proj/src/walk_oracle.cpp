#include "multispec/walk_oracle.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "multispec/errors.hpp"
#include "multispec/moment_engine.hpp"

namespace multispec {

std::string to_label(const Vertex& v) {
  return std::to_string(v.index + 1) + "_" + std::to_string(v.component + 1);
}

Vertex parse_vertex(std::string_view label) {
  const auto sep = label.find('_');
  if (sep == std::string_view::npos || sep == 0 || sep + 1 == label.size()) {
    throw std::invalid_argument("vertex label must look like '1_2', got '" + std::string(label) + "'");
  }
  auto number = [&](std::string_view s) {
    if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw std::invalid_argument("bad vertex label '" + std::string(label) + "'");
    }
    const int value = std::stoi(std::string(s));
    if (value < 1) throw std::invalid_argument("vertex labels are 1-based: '" + std::string(label) + "'");
    return value;
  };
  return Vertex{number(label.substr(sep + 1)) - 1, number(label.substr(0, sep)) - 1};
}

Edge make_edge(const Vertex& a, const Vertex& b) { return a < b ? Edge{a, b} : Edge{b, a}; }

Walk::Walk(std::vector<Vertex> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw std::invalid_argument("walk needs at least one vertex");
  if (steps_.front() != steps_.back()) throw std::invalid_argument("walk is not closed");
  std::set<Vertex> seen;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (seen.insert(steps_[i]).second) vertices_.push_back(steps_[i]);
    if (i + 1 < steps_.size()) {
      if (steps_[i] == steps_[i + 1]) throw std::invalid_argument("walk contains a loop step");
      ++passes_[make_edge(steps_[i], steps_[i + 1])];
    }
  }
}

int Walk::vertices_in(int component) const {
  return static_cast<int>(std::count_if(vertices_.begin(), vertices_.end(),
                                        [component](const Vertex& v) { return v.component == component; }));
}

std::string Walk::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (i) out += ',';
    out += to_label(steps_[i]);
  }
  return out;
}

Walk parse_walk(std::string_view labels) {
  std::vector<Vertex> steps;
  std::size_t start = 0;
  while (start <= labels.size()) {
    auto comma = labels.find(',', start);
    if (comma == std::string_view::npos) comma = labels.size();
    std::string_view token = labels.substr(start, comma - start);
    while (!token.empty() && (token.front() == ' ' || token.front() == '(')) token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == ')')) token.remove_suffix(1);
    steps.push_back(parse_vertex(token));
    start = comma + 1;
  }
  return Walk(std::move(steps));
}

bool is_minimal(const Walk& walk) {
  std::map<int, int> next_unused;
  std::set<Vertex> seen;
  for (const Vertex& v : walk.steps()) {
    if (seen.count(v)) continue;
    if (v.index != next_unused[v.component]) return false;
    ++next_unused[v.component];
    seen.insert(v);
  }
  return true;
}

namespace {

// Relabels by first appearance; works for any vertex key type.
template <class Key, class ComponentOf>
std::vector<Vertex> relabel(const std::vector<Key>& sequence, ComponentOf component_of) {
  std::map<Key, Vertex> renamed;
  std::map<int, int> next_unused;
  std::vector<Vertex> out;
  out.reserve(sequence.size());
  for (const Key& key : sequence) {
    auto it = renamed.find(key);
    if (it == renamed.end()) {
      const int comp = component_of(key);
      it = renamed.emplace(key, Vertex{comp, next_unused[comp]++}).first;
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

Walk minimize(const Walk& walk) {
  return Walk(relabel(walk.steps(), [](const Vertex& v) { return v.component; }));
}

namespace {

class EssentialWalkSearch {
 public:
  EssentialWalkSearch(const EnsembleSpec& spec, int length) : spec_(spec), length_(length) {}

  std::vector<Walk> run() {
    for (int root = 0; root < spec_.kappa; ++root) {
      components_.assign(1, root);
      depth_.assign(1, 0);
      adjacency_.assign(1, {});
      next_index_.assign(spec_.kappa, 0);
      next_index_[root] = 1;
      local_index_.assign(1, 0);
      edges_ = 0;
      path_.assign(1, 0);
      extend(0);
    }
    return std::move(found_);
  }

 private:
  void extend(int current) {
    const int remaining = length_ - static_cast<int>(path_.size()) + 1;
    if (remaining == 0) {
      if (current == 0) record();
      return;
    }
    // Revisit along an existing tree edge.
    // Index loop: deeper calls grow (and later restore) the adjacency lists.
    const std::size_t degree = adjacency_[current].size();
    for (std::size_t e = 0; e < degree; ++e) {
      const int neighbour = adjacency_[current][e];
      if (depth_[neighbour] > remaining - 1) continue;
      path_.push_back(neighbour);
      extend(neighbour);
      path_.pop_back();
    }
    // Open a new vertex; it must be the smallest unused index of its component.
    if (edges_ < length_ / 2 && depth_[current] + 1 <= remaining - 1) {
      const int from = components_[current];
      for (int comp = 0; comp < spec_.kappa; ++comp) {
        if (!spec_.connected(from, comp)) continue;
        const int id = static_cast<int>(components_.size());
        components_.push_back(comp);
        local_index_.push_back(next_index_[comp]++);
        depth_.push_back(depth_[current] + 1);
        adjacency_.push_back({current});
        adjacency_[current].push_back(id);
        ++edges_;
        path_.push_back(id);

        extend(id);

        path_.pop_back();
        --edges_;
        adjacency_[current].pop_back();
        adjacency_.pop_back();
        depth_.pop_back();
        --next_index_[comp];
        local_index_.pop_back();
        components_.pop_back();
      }
    }
  }

  void record() {
    std::vector<Vertex> steps;
    steps.reserve(path_.size());
    for (int id : path_) steps.push_back(Vertex{components_[id], local_index_[id]});
    Walk walk(std::move(steps));
    if (sgn(walk_weight(walk, spec_)) > 0) found_.push_back(std::move(walk));
  }

  const EnsembleSpec& spec_;
  int length_;
  std::vector<int> components_;
  std::vector<int> local_index_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> next_index_;
  std::vector<int> path_;
  int edges_ = 0;
  std::vector<Walk> found_;
};

}  // namespace

std::vector<Walk> enumerate_essential_walks(const EnsembleSpec& spec, int length, int max_length) {
  if (length < 0 || length % 2 != 0) {
    throw std::invalid_argument("essential walks have even non-negative length, got " + std::to_string(length));
  }
  if (length > max_length) {
    throw GuardError("walk enumeration of length " + std::to_string(length) + " exceeds the limit " +
                     std::to_string(max_length));
  }
  if (spec.max_moment_index() < length / 2) {
    throw SpecError(SpecErrorKind::InsufficientMoments,
                    "walks of length " + std::to_string(length) + " need X_2..X_" + std::to_string(length));
  }
  if (length == 0) {
    std::vector<Walk> trivial;
    for (int j = 0; j < spec.kappa; ++j) trivial.emplace_back(std::vector<Vertex>{Vertex{j, 0}});
    return trivial;
  }
  return EssentialWalkSearch(spec, length).run();
}

Rational walk_weight(const Walk& walk, const EnsembleSpec& spec) {
  if (!walk.is_tree()) throw std::invalid_argument("walk " + walk.to_string() + " does not have a tree skeleton");
  for (const Vertex& v : walk.vertices()) {
    if (v.component < 0 || v.component >= spec.kappa) {
      throw std::invalid_argument("vertex " + to_label(v) + " outside the spec's components");
    }
  }
  Rational weight(1);
  for (const auto& [edge, passes] : walk.pass_counts()) {
    if (passes % 2 != 0) {
      throw std::invalid_argument("edge " + to_label(edge.first) + "-" + to_label(edge.second) +
                                  " is passed an odd number of times");
    }
    if (!spec.connected(edge.first.component, edge.second.component)) return Rational(0);
    if (passes / 2 > spec.max_moment_index()) {
      throw SpecError(SpecErrorKind::InsufficientMoments, "walk needs X_" + std::to_string(passes));
    }
    weight *= spec.p * spec.even_moment(passes / 2);
  }
  for (int j = 0; j < spec.kappa; ++j) weight *= pow(spec.alpha[j], static_cast<unsigned>(walk.vertices_in(j)));
  return weight;
}

Rational oracle_moment(const EnsembleSpec& spec, int order, int max_length) {
  Rational total(0);
  for (const Walk& w : enumerate_essential_walks(spec, order, max_length)) total += walk_weight(w, spec);
  return total;
}

namespace {

// Vertices reachable from `start` in the skeleton without crossing `cut`.
std::set<Vertex> side_of(const Walk& walk, const Vertex& start, const Edge& cut) {
  std::map<Vertex, std::vector<Vertex>> adjacency;
  for (const auto& [edge, passes] : walk.pass_counts()) {
    if (edge == cut) continue;
    adjacency[edge.first].push_back(edge.second);
    adjacency[edge.second].push_back(edge.first);
  }
  std::set<Vertex> side{start};
  std::queue<Vertex> frontier;
  frontier.push(start);
  while (!frontier.empty()) {
    const Vertex v = frontier.front();
    frontier.pop();
    for (const Vertex& nb : adjacency[v]) {
      if (side.insert(nb).second) frontier.push(nb);
    }
  }
  return side;
}

void require_splittable(const Walk& walk) {
  if (walk.length() < 2) throw std::invalid_argument("first-edge split needs a walk of positive length");
  if (!walk.is_tree()) throw std::invalid_argument("first-edge split needs a tree skeleton");
}

}  // namespace

WalkClassification classify_first_edge(const Walk& walk) {
  require_splittable(walk);
  const auto& steps = walk.steps();
  const Vertex rho = steps[0];
  const Vertex nu = steps[1];
  const Edge first = make_edge(rho, nu);
  const std::set<Vertex> below_nu = side_of(walk, nu, first);

  WalkClassification c;
  c.l = walk.length() / 2;
  c.root_component = rho.component;
  c.second_component = nu.component;
  std::set<Vertex> root_neighbours;
  for (int i = 0; i < walk.length(); ++i) {
    const Vertex& from = steps[i];
    const Vertex& to = steps[i + 1];
    if (from == rho) {
      ++c.r;
      root_neighbours.insert(to);
      if (to == nu) ++c.f;
    }
    if (from == nu && to != rho) ++c.nu_departures;
  }
  int subtree_passes = 0;
  for (const auto& [edge, passes] : walk.pass_counts()) {
    if (edge != first && below_nu.count(edge.first) && below_nu.count(edge.second)) subtree_passes += passes;
  }
  c.u = subtree_passes / 2;
  c.single_root_edge = root_neighbours.size() == 1;
  return c;
}

FirstEdgeSplit split_first_edge(const Walk& walk) {
  require_splittable(walk);
  const auto& steps = walk.steps();
  const Vertex rho = steps[0];
  const Vertex nu = steps[1];
  const std::set<Vertex> below_nu = side_of(walk, nu, make_edge(rho, nu));

  std::vector<Vertex> left{rho};
  std::vector<Vertex> right{rho};
  std::vector<int> code;
  for (int i = 0; i < walk.length(); ++i) {
    const Vertex& from = steps[i];
    const Vertex& to = steps[i + 1];
    if (from == rho) code.push_back(to == nu ? 1 : 0);
    // Only rho-nu joins the nu side to the rest, so one endpoint decides.
    const bool on_left = below_nu.count(from) || below_nu.count(to);
    (on_left ? left : right).push_back(to);
  }
  return FirstEdgeSplit{minimize(Walk(std::move(left))), minimize(Walk(std::move(right))), std::move(code)};
}

namespace {

// Segments of a walk between consecutive visits to its root.
std::vector<std::vector<Vertex>> excursions(const Walk& walk) {
  std::vector<std::vector<Vertex>> out;
  const auto& steps = walk.steps();
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i - 1] == walk.root()) out.emplace_back();
    out.back().push_back(steps[i]);
  }
  return out;
}

}  // namespace

Walk gather(const Walk& left, const Walk& right, std::span<const int> code) {
  if (left.root().component != right.root().component) {
    throw std::invalid_argument("left and right parts must share the root component");
  }
  const auto left_parts = excursions(left);
  const auto right_parts = excursions(right);
  std::set<Vertex> left_root_neighbours;
  for (const auto& part : left_parts) left_root_neighbours.insert(part.front());
  if (left_root_neighbours.size() != 1) throw std::invalid_argument("left part must have one edge at its root");
  if (code.empty() || code.front() != 1) throw std::invalid_argument("code must start with 1");
  const auto ones = static_cast<std::size_t>(std::count(code.begin(), code.end(), 1));
  if (ones != left_parts.size() || code.size() - ones != right_parts.size() ||
      std::any_of(code.begin(), code.end(), [](int c) { return c != 0 && c != 1; })) {
    throw std::invalid_argument("code does not match the excursion counts of the parts");
  }

  // Tag 0 is the shared root, 1 marks left vertices, 2 marks right ones.
  using Tagged = std::pair<int, Vertex>;
  auto tag = [&](int side, const Vertex& v) {
    const Vertex& root = side == 1 ? left.root() : right.root();
    return v == root ? Tagged{0, left.root()} : Tagged{side, v};
  };
  std::vector<Tagged> sequence{Tagged{0, left.root()}};
  std::size_t next_left = 0;
  std::size_t next_right = 0;
  for (int symbol : code) {
    const bool from_left = symbol == 1;
    const auto& part = from_left ? left_parts[next_left++] : right_parts[next_right++];
    for (const Vertex& v : part) sequence.push_back(tag(from_left ? 1 : 2, v));
  }
  return Walk(relabel(sequence, [](const Tagged& t) { return t.second.component; }));
}

WalkCensus::WalkCensus(const EnsembleSpec& spec, int max_half_length)
    : spec_(spec), max_half_length_(max_half_length) {
  if (max_half_length < 0) throw std::invalid_argument("census half length must be non-negative");
  walks_.resize(max_half_length + 1);
  for (int l = 0; l <= max_half_length; ++l) {
    for (Walk& w : enumerate_essential_walks(spec, 2 * l, std::max(2 * l, kDefaultMaxWalkLength))) {
      Rational weight = walk_weight(w, spec);
      WalkClassification shape;
      if (l == 0) {
        shape.root_component = w.root().component;
      } else {
        shape = classify_first_edge(w);
      }
      auto key = std::make_tuple(shape.root_component, l, shape.r);
      auto& tally = all_[key];
      tally.weight += weight;
      ++tally.count;
      if (l > 0 && shape.single_root_edge) {
        auto& single = single_[key];
        single.weight += weight;
        ++single.count;
      }
      walks_[l].push_back(Entry{std::move(w), shape, std::move(weight)});
    }
  }
}

const WalkCensus::Tally& WalkCensus::all(int j, int l, int r) const {
  static const Tally empty{};
  if (l > max_half_length_) throw std::out_of_range("census does not cover half length " + std::to_string(l));
  auto it = all_.find({j, l, r});
  return it == all_.end() ? empty : it->second;
}

const WalkCensus::Tally& WalkCensus::single_root_edge(int j, int l, int r) const {
  static const Tally empty{};
  if (l > max_half_length_) throw std::out_of_range("census does not cover half length " + std::to_string(l));
  auto it = single_.find({j, l, r});
  return it == single_.end() ? empty : it->second;
}

bool IdentityReport::holds() const {
  return unclassified == 0 && first_failure() == nullptr;
}

const IdentityCell* IdentityReport::first_failure() const {
  for (const auto& cell : cells) {
    if (!cell.holds()) return &cell;
  }
  return nullptr;
}

IdentityReport verify_first_splitting(const WalkCensus& census, int l, int r) {
  const EnsembleSpec& spec = census.spec();
  IdentityReport report;
  report.name = "first-splitting l=" + std::to_string(l) + " r=" + std::to_string(r);
  if (l < 0 || r < 0 || r > l) throw std::invalid_argument("first splitting needs 0 <= r <= l");
  if (l == 0) return report;
  const BinomialTable binom(2 * l);

  for (int j = 0; j < spec.kappa; ++j) {
    std::map<std::pair<int, int>, WalkCensus::Tally> by_cell;
    for (const auto& entry : census.walks(l)) {
      const auto& s = entry.shape;
      if (s.root_component != j || s.r != r) continue;
      if (s.f < 1 || s.f > r || s.u < 0 || s.u > l - r) {
        ++report.unclassified;
        continue;
      }
      auto& tally = by_cell[{s.u, s.f}];
      tally.weight += entry.weight;
      ++tally.count;
    }
    for (int f = 1; f <= r; ++f) {
      for (int u = 0; u <= l - r; ++u) {
        IdentityCell cell;
        cell.key = "j=" + std::to_string(j + 1) + " u=" + std::to_string(u) + " f=" + std::to_string(f);
        if (auto it = by_cell.find({u, f}); it != by_cell.end()) {
          cell.enumerated = it->second.weight;
          cell.enumerated_count = it->second.count;
        }
        const auto& head = census.single_root_edge(j, f + u, f);
        const auto& rest = census.all(j, l - u - f, r - f);
        const BigInt& codes = binom(r - 1, f - 1);
        cell.predicted = Rational(codes) * head.weight * rest.weight / spec.alpha[j];
        cell.predicted_count = codes * BigInt(static_cast<unsigned long>(head.count)) *
                               BigInt(static_cast<unsigned long>(rest.count));
        report.cells.push_back(std::move(cell));
      }
    }
    if (r == 0) {
      // No walk of positive length leaves its root zero times.
      IdentityCell cell;
      cell.key = "j=" + std::to_string(j + 1) + " r=0";
      cell.enumerated = census.all(j, l, 0).weight;
      cell.enumerated_count = census.all(j, l, 0).count;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

IdentityReport verify_first_splitting(const EnsembleSpec& spec, int l, int r) {
  return verify_first_splitting(WalkCensus(spec, l), l, r);
}

IdentityReport verify_second_splitting(const WalkCensus& census, int f, int u) {
  const EnsembleSpec& spec = census.spec();
  if (f < 1 || u < 0) throw std::invalid_argument("second splitting needs f >= 1 and u >= 0");
  IdentityReport report;
  report.name = "second-splitting f=" + std::to_string(f) + " u=" + std::to_string(u);
  const int l = f + u;
  const BinomialTable binom(2 * l);

  for (int j = 0; j < spec.kappa; ++j) {
    std::map<std::pair<int, int>, WalkCensus::Tally> by_cell;
    for (const auto& entry : census.walks(l)) {
      const auto& s = entry.shape;
      if (s.root_component != j || !s.single_root_edge || s.r != f) continue;
      if (s.u != u || s.nu_departures > u) {
        ++report.unclassified;
        continue;
      }
      auto& tally = by_cell[{s.second_component, s.nu_departures}];
      tally.weight += entry.weight;
      ++tally.count;
    }
    Rational aggregated(0);
    BigInt aggregated_count(0);
    for (int i = 0; i < spec.kappa; ++i) {
      for (int v = 0; v <= u; ++v) {
        IdentityCell cell;
        cell.key = "j=" + std::to_string(j + 1) + " i=" + std::to_string(i + 1) + " v=" + std::to_string(v);
        if (auto it = by_cell.find({i, v}); it != by_cell.end()) {
          cell.enumerated = it->second.weight;
          cell.enumerated_count = it->second.count;
        }
        if (spec.connected(j, i)) {
          const auto& below = census.all(i, u, v);
          const BigInt& codes = binom(f + v - 1, f - 1);
          cell.predicted = spec.alpha[j] * Rational(codes) * spec.p * spec.even_moment(f) * below.weight;
          cell.predicted_count = codes * BigInt(static_cast<unsigned long>(below.count));
        }
        aggregated += cell.predicted;
        aggregated_count += cell.predicted_count;
        report.cells.push_back(std::move(cell));
      }
    }
    IdentityCell total;
    total.key = "j=" + std::to_string(j + 1) + " S2(" + std::to_string(l) + "," + std::to_string(f) + ")";
    total.enumerated = census.single_root_edge(j, l, f).weight;
    total.enumerated_count = census.single_root_edge(j, l, f).count;
    total.predicted = aggregated;
    total.predicted_count = aggregated_count;
    report.cells.push_back(std::move(total));
  }
  return report;
}

IdentityReport verify_second_splitting(const EnsembleSpec& spec, int f, int u) {
  return verify_second_splitting(WalkCensus(spec, f + u), f, u);
}

namespace {

void require_cluster_arguments(int j, std::span<const int> i_list) {
  if (j < 1) throw std::invalid_argument("cluster entry multiplicity j must be >= 1");
  if (std::any_of(i_list.begin(), i_list.end(), [](int i) { return i < 1; })) {
    throw std::invalid_argument("cluster pass multiplicities must be >= 1");
  }
}

BigInt factorial(int n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

}  // namespace

BigInt cluster_pass_count(int j, std::span<const int> i_list) {
  require_cluster_arguments(j, i_list);
  const int s = std::accumulate(i_list.begin(), i_list.end(), 0);
  BigInt entry;
  mpz_bin_uiui(entry.get_mpz_t(), static_cast<unsigned long>(j + s - 1), static_cast<unsigned long>(j - 1));

  Rational ratio{factorial(s)};
  int remaining = s;
  for (int i : i_list) {
    ratio *= i;
    ratio /= remaining;
    ratio /= Rational(factorial(i));
    remaining -= i;
  }
  ratio *= Rational(entry);
  if (ratio.get_den() != 1) throw std::logic_error("cluster pass count is not an integer");
  return ratio.get_num();
}

BigInt brute_force_cluster_count(int j, std::span<const int> i_list, int limit) {
  require_cluster_arguments(j, i_list);
  const int s = std::accumulate(i_list.begin(), i_list.end(), 0);
  if (j + s > limit) {
    throw GuardError("brute-force cluster count with j + s = " + std::to_string(j + s) + " exceeds " +
                     std::to_string(limit));
  }
  // Symbol 0 is the entry edge e_0, symbol r the r-th child edge.
  std::vector<int> departures(static_cast<std::size_t>(j), 0);
  for (std::size_t r = 0; r < i_list.size(); ++r) departures.insert(departures.end(), i_list[r], static_cast<int>(r + 1));
  std::sort(departures.begin(), departures.end());

  BigInt admissible(0);
  do {
    if (departures.back() != 0) continue;
    int next_new = 1;
    bool ordered = true;
    std::vector<bool> used(i_list.size() + 1, false);
    for (int symbol : departures) {
      if (symbol == 0 || used[symbol]) continue;
      if (symbol != next_new) {
        ordered = false;
        break;
      }
      used[symbol] = true;
      ++next_new;
    }
    if (ordered) ++admissible;
  } while (std::next_permutation(departures.begin(), departures.end()));
  return admissible;
}

}  // namespace multispec

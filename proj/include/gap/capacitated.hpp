// Copyright 2026 The gapsolve Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Primal-dual solver for degree-bounded assignment on the expanded graph.
//
// All surplus copies are reached through a single pool node: using a'_i means
// routing one unit from the pool into a_i, and the pool absorbs units leaving
// through b'_j. Original vertices keep one label each for their demand copy;
// the surplus copies of a side share one label. With W = offset - cost the
// reduced cost of every residual arc is a label slack:
//
//   a_i -> b_j  (pair unused)      l(a_i) + l(b_j) - W(i,j)
//   b_j -> a_i  (pair used)        -(l(a_i) + l(b_j) - W(i,j))
//   pool -> a_i (a'_i has room)    l(a') - l(a_i)
//   a_i -> pool (a'_i in use)      l(a_i) - l(a')
//   b_j -> pool (b'_j has room)    l(b') - l(b_j)
//   pool -> b_j (b'_j in use)      l(b_j) - l(b')
//
// Every augmentation follows a path of zero-slack arcs found by growing an
// alternating forest from one unsaturated demand copy, raising and lowering
// labels by the minimum slack whenever the equality graph is exhausted. This
// keeps every residual slack non-negative, so the matching is optimal for the
// demands routed so far. Phase 1 saturates A demand copies, phase 2 the B
// demand copies that are still short.
//
// A used pair may carry negative slack: that is the multiplier of its
// one-use bound, and the pair is tight once it is added back.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gap/expansion.hpp"
#include "gap/instance.hpp"

namespace gap {

/// Node of the residual search: an A vertex, a B vertex, or the surplus pool.
struct Node {
  enum class Kind : std::uint8_t { A, B, Pool };
  Kind kind = Kind::A;
  int index = 0;
  friend bool operator==(const Node&, const Node&) = default;
};

inline Node node_of(Side side, int index) {
  return {side == Side::A ? Node::Kind::A : Node::Kind::B, index};
}
inline constexpr Node kPool{Node::Kind::Pool, 0};

inline std::string to_string(const Node& n) {
  switch (n.kind) {
    case Node::Kind::A: return "a" + std::to_string(n.index);
    case Node::Kind::B: return "b" + std::to_string(n.index);
    case Node::Kind::Pool: break;
  }
  return "pool";
}

/// Matched original pairs with per-copy counters (Num).
struct CapacitatedMatching {
  Matrix<char> used;
  std::vector<int> num_a, num_a_surplus;
  std::vector<int> num_b, num_b_surplus;
  int pair_count = 0;

  bool matched(int i, int j) const { return used(std::size_t(i), std::size_t(j)) != 0; }
};

struct CapacitatedDuals {
  std::vector<Weight> label_a;
  std::vector<Weight> label_b;
  Weight label_a_surplus = 0;
  Weight label_b_surplus = 0;
};

struct CapacitatedState {
  ExpandedGraph graph;
  CapacitatedMatching matching;
  CapacitatedDuals duals;
};

/// Initial labels: l(b) = 0, l(a_i) = max_j W(i,j); the surplus labels are
/// offset and 0, which keeps every pool arc slack non-negative.
inline CapacitatedState make_state(const Instance& inst) {
  CapacitatedState st{build_expanded_graph(inst), {}, {}};
  const auto s = static_cast<std::size_t>(inst.s), t = static_cast<std::size_t>(inst.t);
  auto& m = st.matching;
  m.used = Matrix<char>(s, t, 0);
  m.num_a.assign(s, 0);
  m.num_a_surplus.assign(s, 0);
  m.num_b.assign(t, 0);
  m.num_b_surplus.assign(t, 0);
  auto& d = st.duals;
  const auto& w = st.graph.pair_weights();
  d.label_a.resize(s);
  for (std::size_t i = 0; i < s; ++i) d.label_a[i] = std::ranges::max(w.row(i));
  d.label_b.assign(t, 0);
  d.label_a_surplus = st.graph.transform().offset;
  d.label_b_surplus = 0;
  return st;
}

inline int num_of(const CapacitatedMatching& m, const CopyRef& c) {
  const auto& v = c.side == Side::A ? (c.kind == CopyKind::Demand ? m.num_a : m.num_a_surplus)
                                    : (c.kind == CopyKind::Demand ? m.num_b : m.num_b_surplus);
  return v.at(static_cast<std::size_t>(c.index));
}

/// A copy is free while its counter is below its quota.
inline bool is_free(const CopyRef& c, const CapacitatedState& st) {
  return num_of(st.matching, c) < st.graph.quota(c);
}

inline Weight pair_slack(const CapacitatedState& st, int i, int j) {
  return st.duals.label_a[i] + st.duals.label_b[j] -
         st.graph.pair_weights()(std::size_t(i), std::size_t(j));
}

/// Complementary slackness over every arc: unused pairs and free pool arcs
/// have non-negative slack, used pairs and used pool arcs non-positive.
inline bool duals_consistent(const CapacitatedState& st) {
  const auto& g = st.graph;
  const auto& m = st.matching;
  const auto& d = st.duals;
  for (int i = 0; i < g.s(); ++i)
    for (int j = 0; j < g.t(); ++j) {
      const Weight sl = pair_slack(st, i, j);
      if (m.matched(i, j) ? sl > 0 : sl < 0) return false;
    }
  for (int i = 0; i < g.s(); ++i) {
    const Weight sl = d.label_a_surplus - d.label_a[i];
    if (is_free(a_surplus(i), st) && sl < 0) return false;
    if (m.num_a_surplus[i] > 0 && sl > 0) return false;
  }
  for (int j = 0; j < g.t(); ++j) {
    const Weight sl = d.label_b_surplus - d.label_b[j];
    if (is_free(b_surplus(j), st) && sl < 0) return false;
    if (m.num_b_surplus[j] > 0 && sl > 0) return false;
  }
  return true;
}

/// One unit-bound multiplier per used pair: max(0, -slack). With it added,
/// l(a) + l(b) + z = W holds on every used pair.
inline Weight pair_multiplier(const CapacitatedState& st, int i, int j) {
  return st.matching.matched(i, j) ? std::max<Weight>(0, -pair_slack(st, i, j)) : 0;
}

/// Lower bound on the total cost implied by the labels. Equals the cost of
/// the current matching whenever duals_consistent() holds and all demand
/// copies are saturated.
inline Cost dual_objective(const CapacitatedState& st) {
  const auto& g = st.graph;
  const auto& d = st.duals;
  const Cost offset = g.transform().offset;
  Cost demand_a = 0, demand_b = 0, total = 0;
  for (int i = 0; i < g.s(); ++i) {
    const int q = g.quota(a_copy(i));
    demand_a += q;
    total += q * (offset - d.label_a[i]);
    total -= g.quota(a_surplus(i)) * std::max<Weight>(0, d.label_a[i] - d.label_a_surplus);
  }
  for (int j = 0; j < g.t(); ++j) {
    const int q = g.quota(b_copy(j));
    demand_b += q;
    total -= q * d.label_b[j];
    total -= g.quota(b_surplus(j)) * std::max<Weight>(0, d.label_b[j] - d.label_b_surplus);
  }
  const Weight pool_potential = d.label_a_surplus - offset;
  total -= pool_potential * (demand_b - demand_a);
  for (int i = 0; i < g.s(); ++i)
    for (int j = 0; j < g.t(); ++j) total -= std::max<Weight>(0, -pair_slack(st, i, j));
  return total;
}

/// Alternating path from a root demand copy. nodes.front() is the root. If the
/// path ends at the pool, the last link either fills a free surplus copy of the
/// opposite side or releases a used surplus copy on the root's side; otherwise
/// it ends at a free demand copy of the opposite side.
struct AugmentingPath {
  Side root_side = Side::A;
  std::vector<Node> nodes;
};

struct ForestStats {
  int dual_updates = 0;
};

namespace detail {

inline constexpr Weight kUnreached = std::numeric_limits<Weight>::max();

/// Dense node numbering: A vertices, then B vertices, then the pool.
struct NodeIndex {
  int s, t;
  int size() const { return s + t + 1; }
  int of(const Node& n) const {
    return n.kind == Node::Kind::A ? n.index : n.kind == Node::Kind::B ? s + n.index : s + t;
  }
  Node at(int k) const {
    if (k < s) return {Node::Kind::A, k};
    if (k < s + t) return {Node::Kind::B, k - s};
    return kPool;
  }
};

/// Slack of the residual arc u -> v traversed in the root's search direction.
/// Returns kUnreached when the arc does not exist.
inline Weight arc_slack(const CapacitatedState& st, Side root_side, const Node& u, const Node& v) {
  const auto& m = st.matching;
  const auto& d = st.duals;
  const bool root_a = root_side == Side::A;
  auto pair_of = [&](const Node& x, const Node& y) {
    return x.kind == Node::Kind::A ? std::pair{x.index, y.index} : std::pair{y.index, x.index};
  };
  const Node::Kind root_kind = root_a ? Node::Kind::A : Node::Kind::B;
  if (u.kind == v.kind || u.kind == Node::Kind::Pool) return kUnreached;
  if (v.kind == Node::Kind::Pool) {
    // Root side: release of a used surplus copy. Opposite side: fill a free one.
    const bool a = u.kind == Node::Kind::A;
    const int used = a ? m.num_a_surplus[u.index] : m.num_b_surplus[u.index];
    const int quota = st.graph.quota(a ? a_surplus(u.index) : b_surplus(u.index));
    const Weight own = a ? d.label_a[u.index] : d.label_b[u.index];
    const Weight pool = a ? d.label_a_surplus : d.label_b_surplus;
    if (u.kind == root_kind) return used > 0 ? own - pool : kUnreached;
    return used < quota ? pool - own : kUnreached;
  }
  const auto [i, j] = pair_of(u, v);
  const Weight sl = pair_slack(st, i, j);
  if (u.kind == root_kind) return m.matched(i, j) ? kUnreached : sl;
  return m.matched(i, j) ? -sl : kUnreached;
}

inline bool is_target(const CapacitatedState& st, Side root_side, const Node& n) {
  if (n.kind == Node::Kind::Pool) return true;
  const Side side = n.kind == Node::Kind::A ? Side::A : Side::B;
  return side != root_side && is_free(CopyRef{side, CopyKind::Demand, n.index}, st);
}

}  // namespace detail

/// Grows an alternating forest from the demand copy of `root` until a zero
/// slack path reaches a free copy, updating labels by the minimum slack each
/// time the equality graph is exhausted. Labels in `st` are updated in place;
/// the matching is not touched. Throws InfeasibleError when no free copy is
/// reachable.
///
/// `on_dual_update`, when given, is invoked after each label update with the
/// state and the step size.
template <typename OnDualUpdate>
AugmentingPath grow_forest(CapacitatedState& st, Node root, ForestStats& stats,
                           OnDualUpdate&& on_dual_update) {
  using detail::kUnreached;
  const Side root_side = root.kind == Node::Kind::A ? Side::A : Side::B;
  if (root.kind == Node::Kind::Pool)
    throw std::invalid_argument("grow_forest: the pool cannot be a root");
  if (!is_free(CopyRef{root_side, CopyKind::Demand, root.index}, st))
    throw std::logic_error("grow_forest: root " + to_string(root) + " is not free");

  const detail::NodeIndex idx{st.graph.s(), st.graph.t()};
  const int n = idx.size();
  std::vector<Weight> slack(n, kUnreached);
  std::vector<int> parent(n, -1);
  std::vector<char> in_tree(n, 0);

  auto relax = [&](int k) {
    const Node u = idx.at(k);
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const Weight sl = detail::arc_slack(st, root_side, u, idx.at(v));
      if (sl == kUnreached) continue;
      if (sl < 0) throw std::logic_error("grow_forest: negative slack on a residual arc");
      if (sl < slack[v]) {
        slack[v] = sl;
        parent[v] = k;
      }
    }
  };

  // Ordering among equal slacks: free demand copies first, then by node
  // number, and the pool last.
  auto better = [&](int x, int y) {
    if (slack[x] != slack[y]) return slack[x] < slack[y];
    const bool tx = detail::is_target(st, root_side, idx.at(x)) && x != n - 1;
    const bool ty = detail::is_target(st, root_side, idx.at(y)) && y != n - 1;
    if (tx != ty) return tx;
    if ((x == n - 1) != (y == n - 1)) return y == n - 1;
    return x < y;
  };

  const int root_k = idx.of(root);
  in_tree[root_k] = 1;
  relax(root_k);
  for (;;) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (!in_tree[v] && slack[v] != kUnreached && (pick < 0 || better(v, pick))) pick = v;
    if (pick < 0) {
      std::vector<std::string> cert;
      for (int v = 0; v < n; ++v)
        if (in_tree[v]) cert.push_back(to_string(idx.at(v)));
      throw InfeasibleError("no free copy reachable from " + to_string(root), std::move(cert));
    }
    if (const Weight alpha = slack[pick]; alpha > 0) {
      // Tree members on the root's side lose alpha, the others gain it.
      auto& d = st.duals;
      for (int v = 0; v < n; ++v) {
        if (!in_tree[v]) {
          if (slack[v] != kUnreached) slack[v] -= alpha;
          continue;
        }
        const Node x = idx.at(v);
        const bool same = (x.kind == Node::Kind::A) == (root_side == Side::A);
        Weight& label = x.kind == Node::Kind::A ? d.label_a[x.index] : d.label_b[x.index];
        label += same ? -alpha : alpha;
      }
      ++stats.dual_updates;
      on_dual_update(static_cast<const CapacitatedState&>(st), alpha);
    }
    const Node picked = idx.at(pick);
    if (detail::is_target(st, root_side, picked)) {
      AugmentingPath path{root_side, {}};
      for (int v = pick; v >= 0; v = parent[v]) path.nodes.push_back(idx.at(v));
      std::ranges::reverse(path.nodes);
      return path;
    }
    in_tree[pick] = 1;
    relax(pick);
  }
}

inline AugmentingPath grow_forest(CapacitatedState& st, Node root, ForestStats& stats) {
  return grow_forest(st, root, stats, [](const CapacitatedState&, Weight) {});
}

inline AugmentingPath grow_forest(CapacitatedState& st, Node root) {
  ForestStats stats;
  return grow_forest(st, root, stats);
}

/// Flips the path: unused links become matched and matched links unused; the
/// root's demand counter and the terminal copy's counter move by one. Throws
/// std::logic_error on a malformed or non-tight path.
inline void augment(CapacitatedState& st, const AugmentingPath& path) {
  const auto& nodes = path.nodes;
  auto fail = [](const std::string& why) { throw std::logic_error("augment: " + why); };
  if (nodes.size() < 2) fail("path needs at least one link");
  const Node::Kind root_kind = path.root_side == Side::A ? Node::Kind::A : Node::Kind::B;
  if (nodes.front().kind != root_kind) fail("root is not on the root side");
  if (!is_free(CopyRef{path.root_side, CopyKind::Demand, nodes.front().index}, st))
    fail("root demand copy is saturated");

  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const Node& u = nodes[k];
    const Node& v = nodes[k + 1];
    if (v.kind == Node::Kind::Pool && k + 2 != nodes.size()) fail("pool inside the path");
    if (v.kind != Node::Kind::Pool) {
      const bool even = k % 2 == 0;
      const bool u_root = u.kind == root_kind;
      if (u.kind == v.kind || u_root != even) fail("links do not alternate sides");
    }
    const Weight sl = detail::arc_slack(st, path.root_side, u, v);
    if (sl == detail::kUnreached) fail("link " + to_string(u) + "-" + to_string(v) + " is not alternating");
    if (sl != 0) fail("link " + to_string(u) + "-" + to_string(v) + " is not tight");
  }

  auto& m = st.matching;
  (path.root_side == Side::A ? m.num_a : m.num_b)[nodes.front().index]++;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const Node& u = nodes[k];
    const Node& v = nodes[k + 1];
    if (v.kind == Node::Kind::Pool) {
      const bool a = u.kind == Node::Kind::A;
      int& cnt = (a ? m.num_a_surplus : m.num_b_surplus)[u.index];
      cnt += u.kind == root_kind ? -1 : 1;
      continue;
    }
    const int i = u.kind == Node::Kind::A ? u.index : v.index;
    const int j = u.kind == Node::Kind::A ? v.index : u.index;
    char& cell = m.used(std::size_t(i), std::size_t(j));
    cell = !cell;
    m.pair_count += cell ? 1 : -1;
  }
  if (const Node& last = nodes.back(); last.kind != Node::Kind::Pool)
    (last.kind == Node::Kind::A ? m.num_a : m.num_b)[last.index]++;
}

struct SolveReport {
  std::string algorithm;
  int phase1_augmentations = 0;
  int phase2_augmentations = 0;
  int dual_updates = 0;
  int pruned_pairs = 0;
  Cost dual_objective = 0;
  double wall_ms = 0.0;
};

struct CapacitatedResult {
  Assignment assignment;
  std::vector<CopyPair> copy_pairs;
  SolveReport report;
  CapacitatedState state;
};

namespace detail {

inline void screen(const Instance& inst) {
  const auto rep = validate_instance(inst);
  if (rep.feasible_necessary) return;
  for (const auto& v : rep.violations)
    if (rule::is_structural(v.rule)) throw InstanceError(v.detail, rep.violations);
  std::vector<std::string> cert;
  for (const auto& v : rep.violations) cert.push_back(v.rule + ": " + v.detail);
  throw InfeasibleError("instance violates a necessary feasibility condition", std::move(cert));
}

/// Removes pairs whose both endpoints exceed their demand. Such a pair can
/// only survive in an optimum at zero cost; dropping it leaves an
/// edge-minimal assignment of equal cost.
inline int prune_surplus_pairs(CapacitatedState& st) {
  auto& m = st.matching;
  int pruned = 0;
  for (int i = 0; i < st.graph.s(); ++i)
    for (int j = 0; j < st.graph.t(); ++j) {
      if (!m.matched(i, j) || m.num_a_surplus[i] == 0 || m.num_b_surplus[j] == 0) continue;
      if (st.graph.pair_weights()(std::size_t(i), std::size_t(j)) != st.graph.transform().offset)
        throw std::logic_error("surplus-to-surplus pair with positive cost in the optimum");
      m.used(std::size_t(i), std::size_t(j)) = 0;
      --m.pair_count;
      --m.num_a_surplus[i];
      --m.num_b_surplus[j];
      ++pruned;
    }
  return pruned;
}

template <typename OnDualUpdate>
CapacitatedResult run_phases(const Instance& raw, std::string algorithm, OnDualUpdate&& hook) {
  const auto start = std::chrono::steady_clock::now();
  screen(raw);
  const Instance inst = normalize_instance(raw);

  CapacitatedResult res{{}, {}, {}, make_state(inst)};
  auto& st = res.state;
  auto& rep = res.report;
  rep.algorithm = std::move(algorithm);
  ForestStats stats;

  for (int i = 0; i < inst.s; ++i)
    while (is_free(a_copy(i), st)) {
      augment(st, grow_forest(st, Node{Node::Kind::A, i}, stats, hook));
      ++rep.phase1_augmentations;
    }
  for (int j = 0; j < inst.t; ++j)
    while (is_free(b_copy(j), st)) {
      augment(st, grow_forest(st, Node{Node::Kind::B, j}, stats, hook));
      ++rep.phase2_augmentations;
    }

  rep.pruned_pairs = prune_surplus_pairs(st);
  rep.dual_updates = stats.dual_updates;
  rep.dual_objective = dual_objective(st);

  std::vector<Pair> pairs;
  for (int i = 0; i < inst.s; ++i)
    for (int j = 0; j < inst.t; ++j)
      if (st.matching.matched(i, j)) pairs.push_back({i, j});
  res.copy_pairs = allocate_copies(st.graph, pairs);
  res.assignment = project_matching(st.graph, res.copy_pairs);
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace detail

/// Generalized assignment: minimum total cost subject to both sides' demand
/// and capacity bounds. Throws InfeasibleError when no assignment exists and
/// InstanceError on malformed input.
template <typename OnDualUpdate>
CapacitatedResult solve_ga(const Instance& inst, OnDualUpdate&& hook) {
  return detail::run_phases(inst, "ga", hook);
}

inline CapacitatedResult solve_ga(const Instance& inst) {
  return solve_ga(inst, [](const CapacitatedState&, Weight) {});
}

/// Limited-capacity assignment: every demand is exactly one. Part I gives each
/// a_i its partner, part II each b_j still unmatched.
inline CapacitatedResult solve_lca(const Instance& inst) {
  const bool unit = std::ranges::all_of(inst.a_demand, [](int d) { return d == 1; }) &&
                    std::ranges::all_of(inst.b_demand, [](int d) { return d == 1; });
  if (!unit) throw std::invalid_argument("solve_lca: every demand must be 1");
  return detail::run_phases(inst, "lca", [](const CapacitatedState&, Weight) {});
}

}  // namespace gap

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

// Independent ground truth for the solvers: a definition-level checker,
// exhaustive enumeration for tiny instances, and a flow network with lower
// bounds for feasibility (max flow) and optimal cost (min-cost flow).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gap/instance.hpp"

namespace gap::oracle {

struct DegreeViolation {
  char side = 'a';
  int index = 0;
  int degree = 0;
  int demand = 0;
  int capacity = 0;
};

struct VerifyReport {
  bool feasible = true;
  std::vector<DegreeViolation> degree_violations;
  std::vector<Pair> duplicate_pairs;
  Cost recomputed_cost = 0;
};

/// Checks every degree bound and pair uniqueness, and recomputes the cost.
/// Throws std::out_of_range for indices outside the instance.
inline VerifyReport check_assignment(const Instance& inst, std::span<const Pair> pairs) {
  VerifyReport rep;
  std::vector<int> deg_a(inst.s, 0), deg_b(inst.t, 0);
  std::vector<Pair> sorted(pairs.begin(), pairs.end());
  std::ranges::sort(sorted);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto& p = sorted[k];
    if (p.a < 0 || p.a >= inst.s || p.b < 0 || p.b >= inst.t)
      throw std::out_of_range("pair (" + std::to_string(p.a) + "," + std::to_string(p.b) +
                              ") out of range");
    if (k > 0 && sorted[k - 1] == p) {
      if (rep.duplicate_pairs.empty() || rep.duplicate_pairs.back() != p)
        rep.duplicate_pairs.push_back(p);
      continue;
    }
    ++deg_a[p.a];
    ++deg_b[p.b];
    rep.recomputed_cost += inst.cost(std::size_t(p.a), std::size_t(p.b));
  }
  for (int i = 0; i < inst.s; ++i)
    if (deg_a[i] < inst.a_demand[i] || deg_a[i] > inst.a_capacity[i])
      rep.degree_violations.push_back({'a', i, deg_a[i], inst.a_demand[i], inst.a_capacity[i]});
  for (int j = 0; j < inst.t; ++j)
    if (deg_b[j] < inst.b_demand[j] || deg_b[j] > inst.b_capacity[j])
      rep.degree_violations.push_back({'b', j, deg_b[j], inst.b_demand[j], inst.b_capacity[j]});
  rep.feasible = rep.degree_violations.empty() && rep.duplicate_pairs.empty();
  return rep;
}

inline VerifyReport check_assignment(const Instance& inst, const Assignment& asg) {
  return check_assignment(inst, std::span<const Pair>(asg.pairs));
}

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr int kEnumerationBudget = 20;  // maximum s * t

namespace detail {

/// Lexicographic order of the sorted pair lists encoded by two bit sets,
/// where bit i*t+j stands for pair (i, j).
inline bool lex_less(std::uint32_t x, std::uint32_t y) {
  if (x == y) return false;
  const std::uint32_t diff = x ^ y;
  const std::uint32_t low = diff & (~diff + 1);
  const std::uint32_t above = ~((low << 1) - 1);
  if (x & low) return (y & above) != 0;
  return (x & above) == 0;
}

}  // namespace detail

/// Minimum-cost feasible pair set by enumerating all 2^(s*t) subsets; ties go
/// to the lexicographically smallest sorted pair list. nullopt when no subset
/// is feasible.
inline std::optional<Assignment> brute_force_optimum(const Instance& inst) {
  const int s = inst.s, t = inst.t;
  if (s * t > kEnumerationBudget)
    throw BudgetExceeded("brute force limited to s*t <= " + std::to_string(kEnumerationBudget));
  std::vector<std::uint32_t> row(s, 0), col(t, 0);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < t; ++j) {
      row[i] |= 1u << (i * t + j);
      col[j] |= 1u << (i * t + j);
    }
  std::vector<Cost> bit_cost(static_cast<std::size_t>(s * t));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < t; ++j) bit_cost[i * t + j] = inst.cost(std::size_t(i), std::size_t(j));

  std::optional<std::uint32_t> best;
  Cost best_cost = 0;
  const std::uint64_t limit = std::uint64_t{1} << (s * t);
  for (std::uint64_t m = 0; m < limit; ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    bool ok = true;
    for (int i = 0; ok && i < s; ++i) {
      const int d = std::popcount(mask & row[i]);
      ok = d >= inst.a_demand[i] && d <= inst.a_capacity[i];
    }
    for (int j = 0; ok && j < t; ++j) {
      const int d = std::popcount(mask & col[j]);
      ok = d >= inst.b_demand[j] && d <= inst.b_capacity[j];
    }
    if (!ok) continue;
    Cost c = 0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) c += bit_cost[std::countr_zero(rest)];
    if (!best || c < best_cost || (c == best_cost && detail::lex_less(mask, *best))) {
      best = mask;
      best_cost = c;
    }
  }
  if (!best) return std::nullopt;
  Assignment out;
  for (std::uint32_t rest = *best; rest; rest &= rest - 1) {
    const int k = std::countr_zero(rest);
    out.pairs.push_back({k / t, k % t});
  }
  out.total_cost = best_cost;
  return out;
}

/// Residual graph with integer capacities and costs, shared by the max-flow
/// and min-cost-flow routines below.
class FlowNetwork {
 public:
  struct Arc {
    int to;
    std::int64_t cap;
    std::int64_t cost;
  };

  explicit FlowNetwork(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  int size() const noexcept { return static_cast<int>(adj_.size()); }

  /// Returns the arc id; the reverse arc is id ^ 1.
  int add_arc(int from, int to, std::int64_t cap, std::int64_t cost = 0) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, cap, cost});
    adj_[from].push_back(id);
    arcs_.push_back({from, 0, -cost});
    adj_[to].push_back(id + 1);
    return id;
  }

  std::int64_t flow_on(int id) const { return arcs_[id ^ 1].cap; }

  /// Dinic's blocking-flow max flow.
  std::int64_t max_flow(int src, int dst) {
    std::int64_t total = 0;
    while (bfs_levels(src, dst)) {
      next_.assign(adj_.size(), 0);
      while (std::int64_t f = push(src, dst, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

  /// Nodes reachable from src in the residual graph.
  std::vector<char> reachable(int src) const {
    std::vector<char> seen(adj_.size(), 0);
    std::vector<int> stack{src};
    seen[src] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int id : adj_[u])
        if (arcs_[id].cap > 0 && !seen[arcs_[id].to]) {
          seen[arcs_[id].to] = 1;
          stack.push_back(arcs_[id].to);
        }
    }
    return seen;
  }

  struct FlowCost {
    std::int64_t flow = 0;
    std::int64_t cost = 0;
  };

  /// Successive shortest paths with Dijkstra on reduced costs. All arc costs
  /// must be non-negative initially.
  FlowCost min_cost_max_flow(int src, int dst) {
    const auto n = adj_.size();
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> potential(n, 0), dist(n);
    std::vector<int> via(n);
    FlowCost out;
    for (;;) {
      std::ranges::fill(dist, kInf);
      std::ranges::fill(via, -1);
      using Item = std::pair<std::int64_t, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[src] = 0;
      heap.push({0, src});
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d != dist[u]) continue;
        for (int id : adj_[u]) {
          const auto& a = arcs_[id];
          if (a.cap <= 0) continue;
          const std::int64_t nd = d + a.cost + potential[u] - potential[a.to];
          if (nd < dist[a.to]) {
            dist[a.to] = nd;
            via[a.to] = id;
            heap.push({nd, a.to});
          }
        }
      }
      if (dist[dst] == kInf) break;
      for (std::size_t v = 0; v < n; ++v)
        if (dist[v] < kInf) potential[v] += dist[v];
      std::int64_t push_amt = std::numeric_limits<std::int64_t>::max();
      for (int v = dst; v != src; v = arcs_[via[v] ^ 1].to)
        push_amt = std::min(push_amt, arcs_[via[v]].cap);
      for (int v = dst; v != src; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].cap -= push_amt;
        arcs_[via[v] ^ 1].cap += push_amt;
        out.cost += push_amt * arcs_[via[v]].cost;
      }
      out.flow += push_amt;
    }
    return out;
  }

 private:
  bool bfs_levels(int src, int dst) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[src] = 0;
    q.push(src);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int id : adj_[u])
        if (arcs_[id].cap > 0 && level_[arcs_[id].to] < 0) {
          level_[arcs_[id].to] = level_[u] + 1;
          q.push(arcs_[id].to);
        }
    }
    return level_[dst] >= 0;
  }

  std::int64_t push(int u, int dst, std::int64_t limit) {
    if (u == dst) return limit;
    for (auto& k = next_[u]; k < adj_[u].size(); ++k) {
      const int id = adj_[u][k];
      auto& a = arcs_[id];
      if (a.cap <= 0 || level_[a.to] != level_[u] + 1) continue;
      if (std::int64_t f = push(a.to, dst, std::min(limit, a.cap))) {
        a.cap -= f;
        arcs_[id ^ 1].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

namespace detail {

/// Circulation encoding of an instance: source -> a_i with bounds
/// [demand, capacity], a_i -> b_j with capacity 1 and the pair cost,
/// b_j -> sink with [demand, capacity], and sink -> source unbounded. Lower
/// bounds move into a super source and super sink.
struct Circulation {
  FlowNetwork net;
  int super_source = 0;
  int super_sink = 0;
  std::int64_t required = 0;
  std::vector<int> pair_arc;  // i * t + j -> arc id
  int s = 0, t = 0;

  std::string name(int v) const {
    if (v == 0) return "source";
    if (v <= s) return "a" + std::to_string(v - 1);
    if (v <= s + t) return "b" + std::to_string(v - 1 - s);
    if (v == s + t + 1) return "sink";
    return v == super_source ? "super_source" : "super_sink";
  }
};

inline Circulation build_circulation(const Instance& inst) {
  const int s = inst.s, t = inst.t;
  const int src = 0, sink = s + t + 1;
  Circulation c{FlowNetwork(s + t + 4), s + t + 2, s + t + 3, 0, {}, s, t};
  std::vector<std::int64_t> excess(static_cast<std::size_t>(s + t + 2), 0);
  auto bounded = [&](int u, int v, int lo, int hi) {
    if (hi > lo) c.net.add_arc(u, v, hi - lo);
    excess[v] += lo;
    excess[u] -= lo;
  };
  for (int i = 0; i < s; ++i) bounded(src, 1 + i, inst.a_demand[i], inst.a_capacity[i]);
  c.pair_arc.resize(static_cast<std::size_t>(s * t));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < t; ++j)
      c.pair_arc[i * t + j] = c.net.add_arc(1 + i, 1 + s + j, 1, inst.cost(std::size_t(i), std::size_t(j)));
  for (int j = 0; j < t; ++j) bounded(1 + s + j, sink, inst.b_demand[j], inst.b_capacity[j]);
  c.net.add_arc(sink, src, std::numeric_limits<std::int32_t>::max());
  for (int v = 0; v < s + t + 2; ++v) {
    if (excess[v] > 0) {
      c.net.add_arc(c.super_source, v, excess[v]);
      c.required += excess[v];
    } else if (excess[v] < 0) {
      c.net.add_arc(v, c.super_sink, -excess[v]);
    }
  }
  return c;
}

inline bool bounds_ordered(const Instance& inst) {
  for (int i = 0; i < inst.s; ++i)
    if (inst.a_demand[i] > inst.a_capacity[i]) return false;
  for (int j = 0; j < inst.t; ++j)
    if (inst.b_demand[j] > inst.b_capacity[j]) return false;
  return true;
}

}  // namespace detail

struct FeasibilityResult {
  bool feasible = false;
  /// On infeasibility: the super-source side of a minimum cut.
  std::vector<std::string> cut;
  std::int64_t required = 0;
  std::int64_t achieved = 0;
};

/// Exact feasibility: a circulation meeting every lower bound exists iff the
/// max flow from the super source saturates all lower-bound arcs.
inline FeasibilityResult feasibility_check(const Instance& inst) {
  FeasibilityResult out;
  if (!detail::bounds_ordered(inst)) {
    out.cut = {"demand exceeds capacity"};
    return out;
  }
  auto c = detail::build_circulation(inst);
  out.required = c.required;
  out.achieved = c.net.max_flow(c.super_source, c.super_sink);
  out.feasible = out.achieved == out.required;
  if (!out.feasible) {
    const auto side = c.net.reachable(c.super_source);
    for (int v = 0; v < c.net.size(); ++v)
      if (side[v]) out.cut.push_back(c.name(v));
  }
  return out;
}

/// Optimal assignment via min-cost flow on the circulation encoding.
/// Throws InfeasibleError when the lower bounds cannot be met.
inline Assignment solve_flow_reference(const Instance& inst) {
  if (!detail::bounds_ordered(inst))
    throw InfeasibleError("demand exceeds capacity", {"demand exceeds capacity"});
  auto c = detail::build_circulation(inst);
  const auto res = c.net.min_cost_max_flow(c.super_source, c.super_sink);
  if (res.flow != c.required) {
    const auto side = c.net.reachable(c.super_source);
    std::vector<std::string> cut;
    for (int v = 0; v < c.net.size(); ++v)
      if (side[v]) cut.push_back(c.name(v));
    throw InfeasibleError("lower bounds cannot be met", std::move(cut));
  }
  Assignment out;
  for (int i = 0; i < inst.s; ++i)
    for (int j = 0; j < inst.t; ++j)
      if (c.net.flow_on(c.pair_arc[i * inst.t + j]) > 0) {
        out.pairs.push_back({i, j});
        out.total_cost += inst.cost(std::size_t(i), std::size_t(j));
      }
  return out;
}

}  // namespace gap::oracle

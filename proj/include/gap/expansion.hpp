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

// Vertex-copy expansion of an instance. Every element of A is split into a
// demand copy a_i (quota a_demand[i]) and a surplus copy a'_i (quota
// a_capacity[i] - a_demand[i]); B likewise. Copies are quota counters, not
// materialized vertices. Edges exist between A-B, A-B' and A'-B, all carrying
// the weight of the underlying pair; there are no A'-B' edges.
//
// Costs become weights through W = offset - cost with offset = max cost + 1.
// Among assignments with the same number of pairs this maps minimum cost to
// maximum weight exactly. A reciprocal weight 1/cost would not: costs {1,4}
// sum to 5 and {2,2} to 4, yet the reciprocal sums are 1.25 and 1.0.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gap/hungarian.hpp"
#include "gap/instance.hpp"

namespace gap {

using Weight = hungarian::Weight;
using WeightMatrix = hungarian::WeightMatrix;

enum class Side : std::uint8_t { A, B };
enum class CopyKind : std::uint8_t { Demand, Surplus };

struct CopyRef {
  Side side = Side::A;
  CopyKind kind = CopyKind::Demand;
  int index = 0;
  friend auto operator<=>(const CopyRef&, const CopyRef&) = default;
};

inline CopyRef a_copy(int i) { return {Side::A, CopyKind::Demand, i}; }
inline CopyRef a_surplus(int i) { return {Side::A, CopyKind::Surplus, i}; }
inline CopyRef b_copy(int j) { return {Side::B, CopyKind::Demand, j}; }
inline CopyRef b_surplus(int j) { return {Side::B, CopyKind::Surplus, j}; }

inline std::string to_string(const CopyRef& c) {
  std::string out(1, c.side == Side::A ? 'a' : 'b');
  if (c.kind == CopyKind::Surplus) out += '\'';
  return out + std::to_string(c.index);
}

/// An (A-side copy, B-side copy) edge of the expanded graph.
struct CopyPair {
  CopyRef x;
  CopyRef y;
  friend auto operator<=>(const CopyPair&, const CopyPair&) = default;
};

struct WeightTransform {
  Cost c_max = 0;
  Cost offset = 1;

  Weight to_weight(Cost c) const noexcept { return offset - c; }
  Cost to_cost(Weight w) const noexcept { return offset - w; }
};

struct TransformedWeights {
  WeightMatrix weights;
  WeightTransform transform;
};

/// W[i][j] = (max cost + 1) - cost[i][j]; every weight is at least 1.
inline TransformedWeights transform_costs(const Instance& inst) {
  TransformedWeights out;
  const auto vals = inst.cost.values();
  out.transform.c_max = vals.empty() ? 0 : std::ranges::max(vals);
  out.transform.offset = out.transform.c_max + 1;
  out.weights = WeightMatrix(inst.cost.rows(), inst.cost.cols());
  for (std::size_t i = 0; i < inst.cost.rows(); ++i)
    for (std::size_t j = 0; j < inst.cost.cols(); ++j)
      out.weights(i, j) = out.transform.to_weight(inst.cost(i, j));
  return out;
}

class ExpandedGraph {
 public:
  int s() const noexcept { return s_; }
  int t() const noexcept { return t_; }
  const WeightTransform& transform() const noexcept { return transform_; }
  const WeightMatrix& pair_weights() const noexcept { return weights_; }

  int quota(const CopyRef& c) const {
    const auto& q = c.side == Side::A ? (c.kind == CopyKind::Demand ? a_demand_ : a_surplus_)
                                      : (c.kind == CopyKind::Demand ? b_demand_ : b_surplus_);
    return q.at(static_cast<std::size_t>(c.index));
  }

  bool contains(const CopyRef& c) const noexcept {
    return c.index >= 0 && c.index < (c.side == Side::A ? s_ : t_);
  }

  /// A-side copy x and B-side copy y are adjacent unless both are surplus copies.
  bool connected(const CopyRef& x, const CopyRef& y) const noexcept {
    return contains(x) && contains(y) && x.side == Side::A && y.side == Side::B &&
           !(x.kind == CopyKind::Surplus && y.kind == CopyKind::Surplus);
  }

  Weight weight(const CopyRef& x, const CopyRef& y) const {
    if (!connected(x, y))
      throw std::invalid_argument("no edge between " + to_string(x) + " and " + to_string(y));
    return weights_(static_cast<std::size_t>(x.index), static_cast<std::size_t>(y.index));
  }

  friend ExpandedGraph build_expanded_graph(const Instance& inst);

 private:
  int s_ = 0;
  int t_ = 0;
  WeightTransform transform_;
  WeightMatrix weights_;
  std::vector<int> a_demand_, a_surplus_, b_demand_, b_surplus_;
};

/// Quotas are taken from the instance as given; callers normalize first.
inline ExpandedGraph build_expanded_graph(const Instance& inst) {
  ExpandedGraph g;
  g.s_ = inst.s;
  g.t_ = inst.t;
  auto tw = transform_costs(inst);
  g.transform_ = tw.transform;
  g.weights_ = std::move(tw.weights);
  for (int i = 0; i < inst.s; ++i) {
    g.a_demand_.push_back(inst.a_demand[i]);
    g.a_surplus_.push_back(std::max(0, inst.a_capacity[i] - inst.a_demand[i]));
  }
  for (int j = 0; j < inst.t; ++j) {
    g.b_demand_.push_back(inst.b_demand[j]);
    g.b_surplus_.push_back(std::max(0, inst.b_capacity[j] - inst.b_demand[j]));
  }
  return g;
}

/// Two copy edges landed on the same original pair.
class DuplicatePairError : public std::logic_error {
 public:
  DuplicatePairError(const Pair& p)
      : std::logic_error("expanded matching uses original pair (" + std::to_string(p.a) + "," +
                         std::to_string(p.b) + ") more than once"),
        pair_(p) {}
  const Pair& pair() const noexcept { return pair_; }

 private:
  Pair pair_;
};

/// Merges copies back onto original indices. Rejects non-edges, quota
/// overruns, and two copy edges mapping to one original pair.
inline Assignment project_matching(const ExpandedGraph& g, std::span<const CopyPair> pairs) {
  std::vector<int> used_a_dem(g.s(), 0), used_a_sur(g.s(), 0);
  std::vector<int> used_b_dem(g.t(), 0), used_b_sur(g.t(), 0);
  Matrix<char> seen(static_cast<std::size_t>(g.s()), static_cast<std::size_t>(g.t()), 0);
  Assignment out;
  for (const auto& [x, y] : pairs) {
    if (!g.connected(x, y))
      throw std::invalid_argument("no edge between " + to_string(x) + " and " + to_string(y));
    auto& nx = (x.kind == CopyKind::Demand ? used_a_dem : used_a_sur)[x.index];
    auto& ny = (y.kind == CopyKind::Demand ? used_b_dem : used_b_sur)[y.index];
    if (++nx > g.quota(x) || ++ny > g.quota(y))
      throw std::invalid_argument("copy quota exceeded on edge " + to_string(x) + "-" +
                                  to_string(y));
    char& mark = seen(static_cast<std::size_t>(x.index), static_cast<std::size_t>(y.index));
    if (mark) throw DuplicatePairError({x.index, y.index});
    mark = 1;
    out.pairs.push_back({x.index, y.index});
    out.total_cost += g.transform().to_cost(g.weight(x, y));
  }
  std::ranges::sort(out.pairs);
  return out;
}

/// Distributes the pairs of an edge-minimal feasible assignment over copies:
/// at each vertex the first `demand` partners (by index) use the demand copy.
/// Throws if that would require an A'-B' edge or a quota is overrun.
inline std::vector<CopyPair> allocate_copies(const ExpandedGraph& g, std::span<const Pair> pairs) {
  std::vector<Pair> sorted(pairs.begin(), pairs.end());
  std::ranges::sort(sorted);
  std::vector<int> seen_a(g.s(), 0), seen_b(g.t(), 0);
  std::vector<CopyPair> out;
  out.reserve(sorted.size());
  for (const auto& p : sorted) {
    const CopyKind ka = seen_a[p.a]++ < g.quota(a_copy(p.a)) ? CopyKind::Demand : CopyKind::Surplus;
    const CopyKind kb = seen_b[p.b]++ < g.quota(b_copy(p.b)) ? CopyKind::Demand : CopyKind::Surplus;
    out.push_back({{Side::A, ka, p.a}, {Side::B, kb, p.b}});
  }
  for (const auto& cp : out)
    if (!g.connected(cp.x, cp.y))
      throw std::invalid_argument("assignment is not edge-minimal at pair (" +
                                  std::to_string(cp.x.index) + "," +
                                  std::to_string(cp.y.index) + ")");
  return out;
}

}  // namespace gap

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

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gap/matrix.hpp"

namespace gap {

using Cost = std::int64_t;
using CostMatrix = Matrix<Cost>;

/// Many-to-many assignment instance. Element i of A must receive between
/// a_demand[i] and a_capacity[i] distinct partners in B, and element j of B
/// between b_demand[j] and b_capacity[j] distinct partners in A.
struct Instance {
  int s = 0;
  int t = 0;
  CostMatrix cost;
  std::vector<int> a_demand;
  std::vector<int> a_capacity;
  std::vector<int> b_demand;
  std::vector<int> b_capacity;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// An (a, b) index pair, zero-based.
struct Pair {
  int a = 0;
  int b = 0;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

struct Assignment {
  std::vector<Pair> pairs;  // sorted, unique
  Cost total_cost = 0;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Violation {
  std::string rule;
  std::string detail;
};

struct ValidationReport {
  bool feasible_necessary = true;
  std::vector<Violation> violations;

  bool has(std::string_view rule) const {
    return std::ranges::any_of(violations, [&](const Violation& v) { return v.rule == rule; });
  }
};

/// Thrown when an instance is malformed or cannot be normalized.
class InstanceError : public std::invalid_argument {
 public:
  InstanceError(const std::string& what, std::vector<Violation> violations = {})
      : std::invalid_argument(what), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Raised when no assignment meets every bound. The certificate
/// names what blocks a solution: the vertices reached by the last search, the
/// source side of a saturated cut, or the violated necessary conditions.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<std::string> certificate)
      : std::runtime_error(what), certificate_(std::move(certificate)) {}
  const std::vector<std::string>& certificate() const noexcept { return certificate_; }

 private:
  std::vector<std::string> certificate_;
};

namespace rule {
inline constexpr std::string_view kDimension = "dimension";
inline constexpr std::string_view kNegativeCost = "negative_cost";
inline constexpr std::string_view kNegativeBound = "negative_bound";
inline constexpr std::string_view kADemandGtCapacity = "a_demand_gt_capacity";
inline constexpr std::string_view kBDemandGtCapacity = "b_demand_gt_capacity";
inline constexpr std::string_view kADemandGtT = "a_demand_gt_t";
inline constexpr std::string_view kBDemandGtS = "b_demand_gt_s";
inline constexpr std::string_view kSumADemandGtSumBCapacity = "sum_a_demand_gt_sum_b_capacity";
inline constexpr std::string_view kSumBDemandGtSumACapacity = "sum_b_demand_gt_sum_a_capacity";

/// Rules that make the instance unusable rather than merely infeasible.
inline bool is_structural(std::string_view r) {
  return r == kDimension || r == kNegativeCost || r == kNegativeBound;
}
}  // namespace rule

inline std::int64_t sum_of(std::span<const int> v) {
  return std::accumulate(v.begin(), v.end(), std::int64_t{0});
}

/// Checks the cheap necessary conditions for feasibility. Never throws.
inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  auto add = [&](std::string_view rule_id, std::string detail) {
    rep.violations.push_back({std::string(rule_id), std::move(detail)});
  };

  const auto s = static_cast<std::size_t>(std::max(inst.s, 0));
  const auto t = static_cast<std::size_t>(std::max(inst.t, 0));
  if (inst.s < 1 || inst.t < 1) add(rule::kDimension, "s and t must both be at least 1");
  if (inst.cost.rows() != s || inst.cost.cols() != t)
    add(rule::kDimension, "cost matrix is " + std::to_string(inst.cost.rows()) + "x" +
                              std::to_string(inst.cost.cols()) + ", expected " +
                              std::to_string(s) + "x" + std::to_string(t));
  if (inst.a_demand.size() != s || inst.a_capacity.size() != s)
    add(rule::kDimension, "a_demand/a_capacity must have length s=" + std::to_string(s));
  if (inst.b_demand.size() != t || inst.b_capacity.size() != t)
    add(rule::kDimension, "b_demand/b_capacity must have length t=" + std::to_string(t));
  if (!rep.violations.empty()) {
    rep.feasible_necessary = false;
    return rep;
  }

  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < t; ++j)
      if (inst.cost(i, j) < 0)
        add(rule::kNegativeCost, "cost[" + std::to_string(i) + "][" + std::to_string(j) +
                                     "]=" + std::to_string(inst.cost(i, j)) + " < 0");

  auto check_side = [&](std::span<const int> dem, std::span<const int> cap, char side,
                        int opposite, std::string_view dem_gt_cap, std::string_view dem_gt_opp) {
    for (std::size_t k = 0; k < dem.size(); ++k) {
      const std::string idx = std::string(1, side) + "[" + std::to_string(k) + "]";
      if (dem[k] < 0 || cap[k] < 0) {
        add(rule::kNegativeBound, idx + " has a negative demand or capacity");
        continue;
      }
      if (dem[k] > cap[k])
        add(dem_gt_cap, idx + ": demand " + std::to_string(dem[k]) + " > capacity " +
                            std::to_string(cap[k]));
      if (dem[k] > opposite)
        add(dem_gt_opp, idx + ": demand " + std::to_string(dem[k]) +
                            " exceeds opposite set size " + std::to_string(opposite));
    }
  };
  check_side(inst.a_demand, inst.a_capacity, 'a', inst.t, rule::kADemandGtCapacity,
             rule::kADemandGtT);
  check_side(inst.b_demand, inst.b_capacity, 'b', inst.s, rule::kBDemandGtCapacity,
             rule::kBDemandGtS);

  // Sums use capacities clipped to the opposite set size.
  std::int64_t a_dem = 0, a_cap = 0, b_dem = 0, b_cap = 0;
  for (std::size_t i = 0; i < s; ++i) {
    a_dem += inst.a_demand[i];
    a_cap += std::min(inst.a_capacity[i], inst.t);
  }
  for (std::size_t j = 0; j < t; ++j) {
    b_dem += inst.b_demand[j];
    b_cap += std::min(inst.b_capacity[j], inst.s);
  }
  if (a_dem > b_cap)
    add(rule::kSumADemandGtSumBCapacity,
        "sum of a demands " + std::to_string(a_dem) + " > sum of b capacities " +
            std::to_string(b_cap));
  if (b_dem > a_cap)
    add(rule::kSumBDemandGtSumACapacity,
        "sum of b demands " + std::to_string(b_dem) + " > sum of a capacities " +
            std::to_string(a_cap));

  rep.feasible_necessary = rep.violations.empty();
  return rep;
}

/// Clips capacities to the opposite set size. Throws InstanceError when a
/// violation remains that clipping cannot repair (sum-bound violations are left
/// to the solvers, which report them as infeasibility).
inline Instance normalize_instance(Instance inst) {
  const auto rep = validate_instance(inst);
  std::vector<Violation> hard;
  for (const auto& v : rep.violations)
    if (v.rule != rule::kSumADemandGtSumBCapacity && v.rule != rule::kSumBDemandGtSumACapacity)
      hard.push_back(v);
  if (!hard.empty()) {
    const std::string what = "instance cannot be normalized: " + hard.front().detail;
    throw InstanceError(what, std::move(hard));
  }
  for (auto& c : inst.a_capacity) c = std::min(c, inst.t);
  for (auto& c : inst.b_capacity) c = std::min(c, inst.s);
  return inst;
}

/// Sum of cost over the given pairs. Throws on an out-of-range or repeated pair.
inline Cost assignment_cost(const Instance& inst, std::span<const Pair> pairs) {
  std::vector<Pair> seen(pairs.begin(), pairs.end());
  std::ranges::sort(seen);
  if (std::ranges::adjacent_find(seen) != seen.end())
    throw std::invalid_argument("duplicate pair in assignment");
  Cost total = 0;
  for (const auto& p : pairs) {
    if (p.a < 0 || p.a >= inst.s || p.b < 0 || p.b >= inst.t)
      throw std::out_of_range("pair (" + std::to_string(p.a) + "," + std::to_string(p.b) +
                              ") out of range");
    total += inst.cost(static_cast<std::size_t>(p.a), static_cast<std::size_t>(p.b));
  }
  return total;
}

/// Builds a sorted Assignment with its cost recomputed.
inline Assignment make_assignment(const Instance& inst, std::vector<Pair> pairs) {
  std::ranges::sort(pairs);
  Assignment out;
  out.total_cost = assignment_cost(inst, pairs);
  out.pairs = std::move(pairs);
  return out;
}

}  // namespace gap

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

// Differential driver: random feasible instances solved by every applicable
// solver, with one record per trial.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gap/capacitated.hpp"
#include "gap/io.hpp"
#include "gap/oracles.hpp"
#include "gap/random.hpp"

namespace gap {

struct DiffParams {
  GenParams gen;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct SolverOutcome {
  std::string solver;
  std::optional<Cost> cost;  // empty on error
  bool verified = false;
  std::string error;
};

struct TrialRecord {
  int trial = 0;
  std::string digest;
  Instance instance;
  std::vector<SolverOutcome> outcomes;
  bool agree = true;
};

struct DiffReport {
  std::vector<TrialRecord> trials;
  int disagreements = 0;
};

namespace detail {

template <typename Solve>
SolverOutcome run_solver(const std::string& name, const Instance& inst, Solve&& solve) {
  SolverOutcome out{name, std::nullopt, false, {}};
  try {
    const Assignment asg = solve();
    out.cost = asg.total_cost;
    const auto rep = oracle::check_assignment(inst, asg);
    out.verified = rep.feasible && rep.recomputed_cost == asg.total_cost;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace detail

inline bool all_demands_one(const Instance& inst) {
  return std::ranges::all_of(inst.a_demand, [](int d) { return d == 1; }) &&
         std::ranges::all_of(inst.b_demand, [](int d) { return d == 1; });
}

/// Solves one instance with ga, lca (unit demands only), the flow reference
/// and brute force (within budget).
inline TrialRecord compare_solvers(int trial, const Instance& inst) {
  TrialRecord rec;
  rec.trial = trial;
  rec.digest = instance_digest(inst);
  rec.instance = inst;
  rec.outcomes.push_back(
      detail::run_solver("ga", inst, [&] { return solve_ga(inst).assignment; }));
  if (all_demands_one(inst))
    rec.outcomes.push_back(
        detail::run_solver("lca", inst, [&] { return solve_lca(inst).assignment; }));
  rec.outcomes.push_back(
      detail::run_solver("flow", inst, [&] { return oracle::solve_flow_reference(inst); }));
  if (inst.s * inst.t <= oracle::kEnumerationBudget)
    rec.outcomes.push_back(detail::run_solver("brute", inst, [&] {
      auto best = oracle::brute_force_optimum(inst);
      if (!best) throw InfeasibleError("brute force found no feasible subset", {});
      return *best;
    }));
  for (const auto& o : rec.outcomes)
    rec.agree = rec.agree && o.cost && o.verified && *o.cost == *rec.outcomes.front().cost;
  return rec;
}

/// Runs p.trials seeded trials, handing each record to on_trial as it
/// completes. Returns the number of disagreements.
template <typename OnTrial>
int differential_test(const DiffParams& p, OnTrial&& on_trial) {
  int disagreements = 0;
  Rng rng(p.seed);
  for (int k = 0; k < p.trials; ++k) {
    const Instance inst = random_feasible_instance(p.gen, rng);
    TrialRecord rec = compare_solvers(k, inst);
    if (!rec.agree) ++disagreements;
    on_trial(std::move(rec));
  }
  return disagreements;
}

inline DiffReport differential_test(const DiffParams& p) {
  DiffReport rep;
  rep.disagreements =
      differential_test(p, [&](TrialRecord rec) { rep.trials.push_back(std::move(rec)); });
  return rep;
}

/// Line record; disagreeing trials carry the instance as a fixture.
inline nlohmann::json to_json(const TrialRecord& r) {
  nlohmann::json costs = nlohmann::json::object();
  nlohmann::json errors = nlohmann::json::object();
  for (const auto& o : r.outcomes) {
    costs[o.solver] = o.cost ? nlohmann::json(*o.cost) : nlohmann::json(nullptr);
    if (!o.error.empty()) errors[o.solver] = o.error;
    else if (!o.verified) errors[o.solver] = "assignment failed verification";
  }
  nlohmann::json j = {{"trial", r.trial},
                      {"digest", r.digest},
                      {"s", r.instance.s},
                      {"t", r.instance.t},
                      {"costs", std::move(costs)},
                      {"agree", r.agree}};
  if (!errors.empty()) j["errors"] = std::move(errors);
  if (!r.agree) j["fixture"] = to_json(r.instance);
  return j;
}

}  // namespace gap

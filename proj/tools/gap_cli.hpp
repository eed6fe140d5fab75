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

// Command-line front end. Kept in a header so the unit suites can drive
// run() in-process.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gap/capacitated.hpp"
#include "gap/differential.hpp"
#include "gap/hungarian.hpp"
#include "gap/io.hpp"
#include "gap/oracles.hpp"
#include "gap/random.hpp"

namespace gap::cli {

enum class Exit : int { Ok = 0, Usage = 1, Infeasible = 2, Internal = 3 };

enum class LogLevel { Quiet, Info, Trace };

/// GAP_LOG={quiet|info|trace}; unset means quiet.
inline LogLevel log_level_from_env() {
  const char* v = std::getenv("GAP_LOG");
  if (v == nullptr || std::string(v).empty() || std::string(v) == "quiet") return LogLevel::Quiet;
  if (std::string(v) == "info") return LogLevel::Info;
  if (std::string(v) == "trace") return LogLevel::Trace;
  throw CLI::ValidationError("GAP_LOG", std::string("expected quiet, info or trace, got ") + v);
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  LogLevel level = LogLevel::Quiet;
  bool info() const { return level != LogLevel::Quiet; }
  bool trace() const { return level == LogLevel::Trace; }
};

/// Thrown when a solver breaks one of its own invariants; carries the input.
struct InternalFailure {
  std::string what;
  Instance fixture;
};

inline nlohmann::json pairs_json(const Assignment& asg) { return pairs_to_json(asg.pairs); }

struct SolveOutcome {
  Assignment assignment;
  nlohmann::json diagnostics = nlohmann::json::object();
  double wall_ms = 0.0;
};

inline nlohmann::json report_json(const SolveReport& r) {
  return {{"phase1_augmentations", r.phase1_augmentations},
          {"phase2_augmentations", r.phase2_augmentations},
          {"dual_updates", r.dual_updates},
          {"pruned_pairs", r.pruned_pairs},
          {"dual_objective", r.dual_objective}};
}

/// One solve with the named algorithm. Solver invariant failures become
/// InternalFailure; infeasibility and input errors propagate unchanged.
inline SolveOutcome run_algorithm(const std::string& algorithm, const Instance& inst,
                                  const Context& ctx) {
  SolveOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (algorithm == "ga") {
      int updates = 0;
      auto hook = [&](const CapacitatedState&, Weight alpha) {
        ++updates;
        if (ctx.trace()) ctx.err << "dual update " << updates << ": alpha=" << alpha << '\n';
      };
      auto r = solve_ga(inst, hook);
      out.assignment = std::move(r.assignment);
      out.diagnostics = report_json(r.report);
    } else if (algorithm == "lca") {
      auto r = solve_lca(inst);
      out.assignment = std::move(r.assignment);
      out.diagnostics = report_json(r.report);
    } else if (algorithm == "flow") {
      out.assignment = oracle::solve_flow_reference(inst);
    } else if (algorithm == "brute") {
      auto best = oracle::brute_force_optimum(inst);
      if (!best) throw InfeasibleError("no feasible pair subset exists", {});
      out.assignment = std::move(*best);
    } else if (algorithm == "hungarian") {
      if (inst.s != inst.t || !all_demands_one(inst) ||
          std::ranges::any_of(inst.a_capacity, [](int c) { return c != 1; }) ||
          std::ranges::any_of(inst.b_capacity, [](int c) { return c != 1; }))
        throw std::invalid_argument("hungarian: instance must be square and one-to-one");
      const auto tw = transform_costs(inst);
      const auto r = hungarian::solve_max_weight_perfect(tw.weights);
      std::vector<Pair> pairs;
      for (int i = 0; i < inst.s; ++i) pairs.push_back({i, r.matching.match_of_a[i]});
      out.assignment = make_assignment(inst, std::move(pairs));
      out.diagnostics = {{"augmentations", r.augmentations}, {"dual_updates", r.dual_updates}};
    } else {
      throw std::invalid_argument("unknown algorithm \"" + algorithm + "\"");
    }
  } catch (const InfeasibleError&) {
    throw;
  } catch (const InstanceError&) {
    throw;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::length_error&) {
    throw;
  } catch (const std::exception& e) {
    throw InternalFailure{e.what(), inst};
  }
  out.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline nlohmann::json violations_json(const oracle::VerifyReport& rep) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& d : rep.degree_violations)
    v.push_back({{"side", std::string(1, d.side)},
                 {"index", d.index},
                 {"degree", d.degree},
                 {"demand", d.demand},
                 {"capacity", d.capacity}});
  return v;
}

inline int cmd_solve(const std::string& algorithm, const std::string& path, const Context& ctx) {
  const Instance inst = parse_instance(path);
  const std::string digest = instance_digest(inst);
  try {
    const auto res = run_algorithm(algorithm, inst, ctx);
    const auto check = oracle::check_assignment(inst, res.assignment);
    nlohmann::json j = {{"digest", digest},
                        {"algorithm", algorithm},
                        {"pairs", pairs_json(res.assignment)},
                        {"total_cost", res.assignment.total_cost},
                        {"feasible", check.feasible},
                        {"diagnostics", res.diagnostics},
                        {"wall_ms", res.wall_ms}};
    ctx.out << j.dump() << '\n';
    if (ctx.info())
      ctx.err << algorithm << ": " << res.assignment.pairs.size() << " pairs, cost "
              << res.assignment.total_cost << ", " << res.wall_ms << " ms\n";
    if (!check.feasible || check.recomputed_cost != res.assignment.total_cost)
      throw InternalFailure{"returned assignment fails verification", inst};
    return static_cast<int>(Exit::Ok);
  } catch (const InfeasibleError& e) {
    ctx.out << nlohmann::json{{"digest", digest},
                              {"algorithm", algorithm},
                              {"feasible", false},
                              {"error", e.what()},
                              {"certificate", e.certificate()}}
                   .dump()
            << '\n';
    ctx.err << "infeasible: " << e.what() << '\n';
    return static_cast<int>(Exit::Infeasible);
  }
}

inline int cmd_verify(const std::string& path, const std::string& asg_path, const Context& ctx) {
  const Instance inst = parse_instance(path);
  const auto asg_json = read_json_file(asg_path);
  const auto pairs = pairs_from_json(asg_json);
  for (const auto& p : pairs)
    if (p.a < 0 || p.a >= inst.s || p.b < 0 || p.b >= inst.t)
      throw ParseError(asg_path + ": pair (" + std::to_string(p.a) + "," + std::to_string(p.b) +
                       ") out of range");
  const auto rep = oracle::check_assignment(inst, pairs);
  bool ok = rep.feasible;
  nlohmann::json j = {{"feasible", rep.feasible},
                      {"recomputed_cost", rep.recomputed_cost},
                      {"degree_violations", violations_json(rep)},
                      {"duplicate_pairs", pairs_to_json(rep.duplicate_pairs)}};
  if (asg_json.is_object() && asg_json.contains("total_cost")) {
    const auto claimed = asg_json["total_cost"].get<Cost>();
    j["claimed_cost"] = claimed;
    ok = ok && claimed == rep.recomputed_cost;
  }
  j["ok"] = ok;
  ctx.out << j.dump() << '\n';
  if (!ok) {
    ctx.err << "verification failed: " << rep.degree_violations.size() << " degree violation(s), "
            << rep.duplicate_pairs.size() << " duplicate pair(s)\n";
    return static_cast<int>(Exit::Infeasible);
  }
  return static_cast<int>(Exit::Ok);
}

struct GenOptions {
  int s = 4;
  int t = 4;
  std::uint64_t seed = 0;
  Cost cost_max = 20;
  int cap_max = 3;
  bool demands_one = false;
};

inline int cmd_gen(const GenOptions& o, const Context& ctx) {
  GenParams p;
  p.min_s = p.max_s = o.s;
  p.min_t = p.max_t = o.t;
  p.cost_max = o.cost_max;
  p.cap_max = o.cap_max;
  p.demands_one = o.demands_one;
  Rng rng(o.seed);
  ctx.out << to_json(random_feasible_instance(p, rng)).dump() << '\n';
  return static_cast<int>(Exit::Ok);
}

struct DiffOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  int max_s = 4;
  int max_t = 4;
  Cost cost_max = 20;
  int cap_max = 3;
  bool demands_one = false;
};

inline int cmd_diff(const DiffOptions& o, const Context& ctx) {
  DiffParams p;
  p.trials = o.trials;
  p.seed = o.seed;
  p.gen.max_s = o.max_s;
  p.gen.max_t = o.max_t;
  p.gen.cost_max = o.cost_max;
  p.gen.cap_max = o.cap_max;
  p.gen.demands_one = o.demands_one;
  const int bad = differential_test(p, [&](const TrialRecord& r) {
    ctx.out << to_json(r).dump() << '\n' << std::flush;
    if (!r.agree) ctx.err << "trial " << r.trial << " disagrees (digest " << r.digest << ")\n";
  });
  ctx.out << nlohmann::json{{"summary", true}, {"trials", o.trials}, {"disagreements", bad}}.dump()
          << '\n';
  if (ctx.info()) ctx.err << o.trials << " trials, " << bad << " disagreement(s)\n";
  return static_cast<int>(bad == 0 ? Exit::Ok : Exit::Internal);
}

/// Least-squares slope of log(y) against log(x); nullopt with fewer than two
/// usable points.
inline std::optional<double> loglog_slope(const std::vector<double>& x,
                                          const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] <= 0 || y[k] <= 0) continue;
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den == 0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

struct BenchOptions {
  std::string algorithm = "ga";
  std::vector<int> sizes;
  std::uint64_t seed = 0;
  Cost cost_max = 100;
  int cap_max = 4;
  bool one_to_one = false;
};

inline Instance bench_instance(const BenchOptions& o, int n, Rng& rng) {
  if (o.one_to_one || o.algorithm == "hungarian") {
    Instance inst;
    inst.s = inst.t = n;
    inst.cost = CostMatrix(std::size_t(n), std::size_t(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        inst.cost(std::size_t(i), std::size_t(j)) = uniform_int(rng, 0, o.cost_max);
    inst.a_demand = inst.a_capacity = inst.b_demand = inst.b_capacity =
        std::vector<int>(std::size_t(n), 1);
    return inst;
  }
  GenParams p;
  p.min_s = p.max_s = p.min_t = p.max_t = n;
  p.cost_max = o.cost_max;
  p.cap_max = o.cap_max;
  p.demands_one = o.algorithm == "lca";
  return random_feasible_instance(p, rng);
}

inline int cmd_bench(const BenchOptions& o, const Context& ctx) {
  if (o.algorithm == "brute") throw std::invalid_argument("bench does not run brute force");
  Rng rng(o.seed);
  std::vector<double> xs, ys;
  for (int n : o.sizes) {
    const Instance inst = bench_instance(o, n, rng);
    const auto res = run_algorithm(o.algorithm, inst, ctx);
    xs.push_back(n);
    ys.push_back(res.wall_ms);
    ctx.out << nlohmann::json{{"n", n},
                              {"algorithm", o.algorithm},
                              {"one_to_one", o.one_to_one || o.algorithm == "hungarian"},
                              {"digest", instance_digest(inst)},
                              {"total_cost", res.assignment.total_cost},
                              {"diagnostics", res.diagnostics},
                              {"wall_ms", res.wall_ms}}
                   .dump()
            << '\n'
            << std::flush;
    if (ctx.info()) ctx.err << "n=" << n << ": " << res.wall_ms << " ms\n";
  }
  const auto slope = loglog_slope(xs, ys);
  ctx.out << nlohmann::json{{"summary", true},
                            {"algorithm", o.algorithm},
                            {"sizes", o.sizes},
                            {"loglog_slope", slope ? nlohmann::json(*slope) : nlohmann::json()}}
                 .dump()
          << '\n';
  return static_cast<int>(Exit::Ok);
}

/// Entry point; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized bipartite assignment with demand and capacity bounds", "gap"};
  app.require_subcommand(1);

  std::string algorithm, instance_path, asg_path;
  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  solve->add_option("--algorithm", algorithm, "ga | lca | flow | brute | hungarian")
      ->required()
      ->check(CLI::IsMember({"ga", "lca", "flow", "brute", "hungarian"}));
  solve->add_option("instance", instance_path, "Instance JSON file")->required();

  auto* verify = app.add_subcommand("verify", "Check an assignment against an instance");
  verify->add_option("instance", instance_path, "Instance JSON file")->required();
  verify->add_option("--assignment", asg_path, "Pairs JSON file")->required();

  GenOptions g;
  auto* gen = app.add_subcommand("gen", "Print a seeded random feasible instance");
  gen->add_option("--s", g.s)->required()->check(CLI::PositiveNumber);
  gen->add_option("--t", g.t)->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", g.seed)->required();
  gen->add_option("--cost-max", g.cost_max)->check(CLI::NonNegativeNumber)->capture_default_str();
  gen->add_option("--cap-max", g.cap_max)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_flag("--demands-one", g.demands_one);

  DiffOptions d;
  auto* diff = app.add_subcommand("diff", "Differential test of every solver");
  diff->add_option("--trials", d.trials)->required()->check(CLI::NonNegativeNumber);
  diff->add_option("--seed", d.seed)->required();
  diff->add_option("--max-s", d.max_s)->check(CLI::PositiveNumber)->capture_default_str();
  diff->add_option("--max-t", d.max_t)->check(CLI::PositiveNumber)->capture_default_str();
  diff->add_option("--cost-max", d.cost_max)->check(CLI::NonNegativeNumber)->capture_default_str();
  diff->add_option("--cap-max", d.cap_max)->check(CLI::PositiveNumber)->capture_default_str();
  diff->add_flag("--demands-one", d.demands_one);

  BenchOptions b;
  auto* bench = app.add_subcommand("bench", "Time one algorithm over a size sweep");
  bench->add_option("--algorithm", b.algorithm)
      ->check(CLI::IsMember({"ga", "lca", "flow", "hungarian"}))
      ->capture_default_str();
  bench->add_option("--sizes", b.sizes, "Comma-separated sizes n (s = t = n)")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", b.seed)->required();
  bench->add_option("--cost-max", b.cost_max)->check(CLI::NonNegativeNumber)->capture_default_str();
  bench->add_option("--cap-max", b.cap_max)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_flag("--one-to-one", b.one_to_one, "All bounds 1 (square assignment)");

  Context ctx{out, err};
  try {
    ctx.level = log_level_from_env();
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return static_cast<int>(Exit::Usage);
  }

  try {
    if (*solve) return cmd_solve(algorithm, instance_path, ctx);
    if (*verify) return cmd_verify(instance_path, asg_path, ctx);
    if (*gen) return cmd_gen(g, ctx);
    if (*diff) return cmd_diff(d, ctx);
    return cmd_bench(b, ctx);
  } catch (const InternalFailure& f) {
    err << "internal solver failure: " << f.what << '\n'
        << "fixture: " << to_json(f.fixture).dump() << '\n';
    return static_cast<int>(Exit::Internal);
  } catch (const InstanceError& e) {
    err << "invalid instance: " << e.what() << '\n';
    for (const auto& v : e.violations()) err << "  " << v.rule << ": " << v.detail << '\n';
    return static_cast<int>(Exit::Usage);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return static_cast<int>(Exit::Usage);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return static_cast<int>(Exit::Infeasible);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(Exit::Usage);
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(Exit::Usage);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return static_cast<int>(Exit::Internal);
  }
}

}  // namespace gap::cli

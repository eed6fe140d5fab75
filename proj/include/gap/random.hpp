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

#include <cstdint>
#include <random>

#include "gap/instance.hpp"
#include "gap/oracles.hpp"

namespace gap {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi] by 128-bit multiply-shift; unlike
/// std::uniform_int_distribution the sequence is identical on every platform.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<unsigned __int128>(hi - lo + 1);
  return lo + static_cast<std::int64_t>((static_cast<unsigned __int128>(rng()) * span) >> 64);
}

struct GenParams {
  int min_s = 1;
  int max_s = 4;
  int min_t = 1;
  int max_t = 4;
  Cost cost_max = 20;
  int cap_max = 3;
  bool demands_one = false;
  int max_attempts = 200;
};

/// One draw: capacities in [1, min(cap_max, opposite size)], demands in
/// [0, capacity] (or exactly 1), costs in [0, cost_max]. May be infeasible.
inline Instance random_instance(const GenParams& p, Rng& rng) {
  Instance inst;
  inst.s = static_cast<int>(uniform_int(rng, p.min_s, p.max_s));
  inst.t = static_cast<int>(uniform_int(rng, p.min_t, p.max_t));
  inst.cost = CostMatrix(std::size_t(inst.s), std::size_t(inst.t));
  for (int i = 0; i < inst.s; ++i)
    for (int j = 0; j < inst.t; ++j)
      inst.cost(std::size_t(i), std::size_t(j)) = uniform_int(rng, 0, p.cost_max);
  auto bounds = [&](int n, int opposite, std::vector<int>& dem, std::vector<int>& cap) {
    for (int k = 0; k < n; ++k) {
      const int c = static_cast<int>(uniform_int(rng, 1, std::max(1, std::min(p.cap_max, opposite))));
      cap.push_back(c);
      dem.push_back(p.demands_one ? 1 : static_cast<int>(uniform_int(rng, 0, c)));
    }
  };
  bounds(inst.s, inst.t, inst.a_demand, inst.a_capacity);
  bounds(inst.t, inst.s, inst.b_demand, inst.b_capacity);
  return inst;
}

/// Rejection-samples a feasible instance. After max_attempts misses the
/// demands are halved, then capacities widened, so the loop always ends.
inline Instance random_feasible_instance(const GenParams& p, Rng& rng) {
  for (int stage = 0;; ++stage) {
    for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
      Instance inst = random_instance(p, rng);
      if (stage >= 1 && !p.demands_one)
        for (auto* v : {&inst.a_demand, &inst.b_demand})
          for (auto& d : *v) d /= 2;
      if (stage >= 2) {
        for (auto& c : inst.a_capacity) c = inst.t;
        for (auto& c : inst.b_capacity) c = inst.s;
        if (!p.demands_one) {
          for (auto& d : inst.a_demand) d = 0;
          for (auto& d : inst.b_demand) d = 0;
        }
      }
      if (oracle::feasibility_check(inst).feasible) return inst;
    }
  }
}

}  // namespace gap

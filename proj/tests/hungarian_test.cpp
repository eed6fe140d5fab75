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

#include <functional>

#include <gtest/gtest.h>

#include "gap/hungarian.hpp"
#include "gap/random.hpp"
#include "test_support.hpp"

namespace gap::hungarian {
namespace {

WeightMatrix random_weights(Rng& rng, int n, Weight hi) {
  WeightMatrix w(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(std::size_t(i), std::size_t(j)) = uniform_int(rng, 0, hi);
  return w;
}

// Replays the solve loop step by step, calling `before` and `after` around
// every dual update.
void drive(const WeightMatrix& w,
           const std::function<void(const DualState&)>& before,
           const std::function<void(const DualState&, const DualState&, Weight)>& after) {
  DualState st = init_labels(w);
  for (int root = 0; root < st.size(); ++root) {
    begin_phase(st, w, root);
    for (;;) {
      if (neighborhood_exhausted(st)) {
        before(st);
        const Weight alpha = compute_alpha_l(st);
        DualState next = apply_dual_update(st, alpha);
        after(st, next, alpha);
        st = std::move(next);
      }
      const int u = select_neighbor(st);
      if (st.match_b[u] == kFree) {
        augment(st, u);
        break;
      }
      extend_tree(st, w, u);
    }
  }
}

TEST(InitLabels, RowMaxima) {
  auto st = init_labels({{1, 2}, {3, 1}});
  EXPECT_EQ(st.label_a, (std::vector<Weight>{2, 3}));
  EXPECT_EQ(st.label_b, (std::vector<Weight>{0, 0}));
  st = init_labels({{0}});
  EXPECT_EQ(st.label_a, (std::vector<Weight>{0}));
  st = init_labels({{2, 1}, {2, 1}});
  EXPECT_EQ(st.label_a, (std::vector<Weight>{2, 2}));
  EXPECT_TRUE(std::ranges::all_of(st.match_a, [](int m) { return m == kFree; }));
}

TEST(InitLabels, RejectsNonSquare) {
  EXPECT_THROW(init_labels(WeightMatrix(2, 3)), std::invalid_argument);
  EXPECT_THROW(init_labels(WeightMatrix()), std::invalid_argument);
}

TEST(ComputeAlpha, HandSimulatedTwoByTwo) {
  const WeightMatrix w{{2, 1}, {2, 1}};
  DualState st = init_labels(w);
  begin_phase(st, w, 0);
  ASSERT_FALSE(neighborhood_exhausted(st));
  ASSERT_EQ(select_neighbor(st), 0);
  augment(st, 0);
  begin_phase(st, w, 1);
  ASSERT_EQ(select_neighbor(st), 0);
  extend_tree(st, w, 0);  // b_1 matched to a_1: S = {a_2, a_1}, T = {b_1}
  ASSERT_TRUE(neighborhood_exhausted(st));
  EXPECT_EQ(st.slack[1], 1);
  EXPECT_EQ(compute_alpha_l(st), 1);
  // Completing the solve must reach the permutation optimum.
  EXPECT_EQ(solve_max_weight_perfect(w).matching.weight, testing::max_permutation_weight(w));
}

TEST(ComputeAlpha, DirectStates) {
  DualState st = init_labels(WeightMatrix(2, 2));
  st.slack = {0, 3};
  st.in_t = {1, 0};
  EXPECT_EQ(compute_alpha_l(st), 3);
  st.slack = {5, 5};
  st.in_t = {0, 0};
  EXPECT_EQ(compute_alpha_l(st), 5);
  st.in_t = {1, 1};
  EXPECT_THROW(compute_alpha_l(st), std::logic_error);
}

TEST(ApplyDualUpdate, UpdateRuleByHand) {
  const WeightMatrix w{{2, 1}, {2, 1}};
  DualState st = init_labels(w);
  st.in_s = {1, 1};
  st.in_t = {1, 0};
  st.slack = {0, 1};
  const DualState next = apply_dual_update(st, 1);
  EXPECT_EQ(next.label_a, (std::vector<Weight>{1, 1}));
  EXPECT_EQ(next.label_b, (std::vector<Weight>{1, 0}));
  EXPECT_EQ(next.slack[1], 0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_GE(edge_slack(next, w, i, j), 0) << i << "," << j;
}

TEST(ApplyDualUpdate, IdentityAndForcedCases) {
  const WeightMatrix w{{2, 1}, {2, 1}};
  const DualState st = init_labels(w);
  const DualState same = apply_dual_update(st, 0);
  EXPECT_EQ(same.label_a, st.label_a);
  EXPECT_EQ(same.label_b, st.label_b);

  const WeightMatrix one{{0}};
  DualState single = init_labels(one);
  single.label_a = {5};
  begin_phase(single, one, 0);
  ASSERT_TRUE(neighborhood_exhausted(single));
  const DualState after = apply_dual_update(single, 5);
  EXPECT_EQ(after.label_a, (std::vector<Weight>{0}));
  EXPECT_EQ(edge_slack(after, one, 0, 0), 0);
  EXPECT_EQ(select_neighbor(after), 0);
}

TEST(Solve, Examples) {
  auto r = solve_max_weight_perfect({{1, 2}, {3, 1}});
  EXPECT_EQ(r.matching.match_of_a, (std::vector<int>{1, 0}));
  EXPECT_EQ(r.matching.weight, 5);
  r = solve_max_weight_perfect({{7}});
  EXPECT_EQ(r.matching.match_of_a, (std::vector<int>{0}));
  EXPECT_EQ(r.matching.weight, 7);
  r = solve_max_weight_perfect({{2, 1}, {2, 1}});
  EXPECT_EQ(r.matching.weight, 3);
  // Lowest-index tie-breaking is deterministic.
  EXPECT_EQ(r.matching.match_of_a, solve_max_weight_perfect({{2, 1}, {2, 1}}).matching.match_of_a);
}

TEST(Solve, MatchesPermutationBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = static_cast<int>(uniform_int(rng, 1, 6));
    const auto w = random_weights(rng, n, trial % 2 ? 5 : 100);
    const auto r = solve_max_weight_perfect(w);
    EXPECT_EQ(r.matching.weight, testing::max_permutation_weight(w));
    EXPECT_EQ(r.matching.weight, label_sum(r.duals));
    EXPECT_TRUE(is_feasible(r.duals, w));
    EXPECT_EQ(r.augmentations, n);
    for (int i = 0; i < n; ++i) EXPECT_EQ(r.matching.match_of_b[r.matching.match_of_a[i]], i);
  }
}

TEST(Solve, DualUpdatesPreserveFeasibilityAndTreeTightness) {
  Rng rng(77);
  int updates = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = static_cast<int>(uniform_int(rng, 2, 7));
    const auto w = random_weights(rng, n, 9);
    drive(
        w, [&](const DualState& st) { ASSERT_TRUE(is_feasible(st, w)); },
        [&](const DualState& old, const DualState& next, Weight alpha) {
          ++updates;
          EXPECT_GT(alpha, 0);
          EXPECT_TRUE(is_feasible(next, w));
          bool new_tight = false;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              if (old.in_s[i] && old.in_t[j] && edge_slack(old, w, i, j) == 0)
                EXPECT_EQ(edge_slack(next, w, i, j), 0);
              if (old.in_s[i] && !old.in_t[j] && edge_slack(next, w, i, j) == 0) new_tight = true;
            }
          EXPECT_TRUE(new_tight);
        });
  }
  EXPECT_GT(updates, 100);
}

}  // namespace
}  // namespace gap::hungarian

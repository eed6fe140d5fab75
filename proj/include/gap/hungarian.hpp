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

// Maximum-weight perfect matching on a complete square bipartite graph using
// feasible vertex labelings, the equality graph, and per-column slack values.
// Each step of the method is exposed so the dual invariants can be tested on
// intermediate states.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gap/matrix.hpp"

namespace gap::hungarian {

using Weight = std::int64_t;
using WeightMatrix = Matrix<Weight>;

inline constexpr int kFree = -1;

/// Labels, slacks and the alternating tree grown from a single root.
/// slack[j] is only meaningful for columns outside T.
struct DualState {
  std::vector<Weight> label_a;
  std::vector<Weight> label_b;
  std::vector<Weight> slack;
  std::vector<int> slack_from;  // S-vertex attaining slack[j]; parent link for b_j
  std::vector<char> in_s;
  std::vector<char> in_t;
  std::vector<int> match_a;
  std::vector<int> match_b;
  int root = kFree;

  int size() const noexcept { return static_cast<int>(label_a.size()); }
};

struct PerfectMatching {
  std::vector<int> match_of_a;
  std::vector<int> match_of_b;
  Weight weight = 0;
};

struct Result {
  PerfectMatching matching;
  DualState duals;
  int augmentations = 0;
  int dual_updates = 0;
};

inline void require_square(const WeightMatrix& w) {
  if (w.rows() == 0 || w.rows() != w.cols())
    throw std::invalid_argument("hungarian: weight matrix must be square and non-empty");
}

/// l(b) = 0, l(a_i) = max_j W(a_i, b_j); empty matching, empty tree.
inline DualState init_labels(const WeightMatrix& w) {
  require_square(w);
  const auto n = w.rows();
  DualState st;
  st.label_a.resize(n);
  for (std::size_t i = 0; i < n; ++i) st.label_a[i] = std::ranges::max(w.row(i));
  st.label_b.assign(n, 0);
  st.slack.assign(n, 0);
  st.slack_from.assign(n, kFree);
  st.in_s.assign(n, 0);
  st.in_t.assign(n, 0);
  st.match_a.assign(n, kFree);
  st.match_b.assign(n, kFree);
  return st;
}

inline Weight edge_slack(const DualState& st, const WeightMatrix& w, int a, int b) {
  return st.label_a[a] + st.label_b[b] - w(a, b);
}

/// Starts a new tree at a free A-vertex: S = {root}, T = {}.
inline void begin_phase(DualState& st, const WeightMatrix& w, int root) {
  if (st.match_a.at(root) != kFree) throw std::logic_error("hungarian: root is not free");
  std::ranges::fill(st.in_s, 0);
  std::ranges::fill(st.in_t, 0);
  st.root = root;
  st.in_s[root] = 1;
  for (int j = 0; j < st.size(); ++j) {
    st.slack[j] = edge_slack(st, w, root, j);
    st.slack_from[j] = root;
  }
}

/// True when N_l(S) = T, i.e. no column outside T has zero slack.
inline bool neighborhood_exhausted(const DualState& st) {
  for (int j = 0; j < st.size(); ++j)
    if (!st.in_t[j] && st.slack[j] == 0) return false;
  return true;
}

/// Dual step: minimum slack over columns outside T.
inline Weight compute_alpha_l(const DualState& st) {
  Weight best = std::numeric_limits<Weight>::max();
  bool any = false;
  for (int j = 0; j < st.size(); ++j) {
    if (st.in_t[j]) continue;
    any = true;
    best = std::min(best, st.slack[j]);
  }
  if (!any) throw std::logic_error("hungarian: T covers B, the matching should have augmented");
  return best;
}

/// Lowers S labels and raises T labels by alpha; slacks outside T drop by alpha.
inline DualState apply_dual_update(DualState st, Weight alpha) {
  for (int i = 0; i < st.size(); ++i)
    if (st.in_s[i]) st.label_a[i] -= alpha;
  for (int j = 0; j < st.size(); ++j) {
    if (st.in_t[j])
      st.label_b[j] += alpha;
    else
      st.slack[j] -= alpha;
  }
  return st;
}

/// Lowest-index column in N_l(S) - T, or kFree if there is none.
inline int select_neighbor(const DualState& st) {
  for (int j = 0; j < st.size(); ++j)
    if (!st.in_t[j] && st.slack[j] == 0) return j;
  return kFree;
}

/// Column j is matched: move j into T and its partner into S.
inline void extend_tree(DualState& st, const WeightMatrix& w, int j) {
  const int z = st.match_b.at(j);
  if (z == kFree) throw std::logic_error("hungarian: extend_tree on a free column");
  st.in_t[j] = 1;
  st.in_s[z] = 1;
  for (int k = 0; k < st.size(); ++k) {
    if (st.in_t[k]) continue;
    const Weight sl = edge_slack(st, w, z, k);
    if (sl < st.slack[k]) {
      st.slack[k] = sl;
      st.slack_from[k] = z;
    }
  }
}

/// Flips the alternating path that ends at free column j back to the root.
inline void augment(DualState& st, int j) {
  if (st.match_b.at(j) != kFree) throw std::logic_error("hungarian: augment at matched column");
  while (j != kFree) {
    const int a = st.slack_from[j];
    const int previous = st.match_a[a];
    st.match_a[a] = j;
    st.match_b[j] = a;
    j = previous;
  }
  std::ranges::fill(st.in_s, 0);
  std::ranges::fill(st.in_t, 0);
  st.root = kFree;
}

inline bool is_feasible(const DualState& st, const WeightMatrix& w) {
  for (int i = 0; i < st.size(); ++i)
    for (int j = 0; j < st.size(); ++j)
      if (edge_slack(st, w, i, j) < 0) return false;
  return true;
}

inline Weight label_sum(const DualState& st) {
  return std::accumulate(st.label_a.begin(), st.label_a.end(), Weight{0}) +
         std::accumulate(st.label_b.begin(), st.label_b.end(), Weight{0});
}

inline Result solve_max_weight_perfect(const WeightMatrix& w) {
  Result res;
  DualState st = init_labels(w);
  const int n = st.size();
  for (int root = 0; root < n; ++root) {
    begin_phase(st, w, root);
    for (;;) {
      if (neighborhood_exhausted(st)) {
        st = apply_dual_update(std::move(st), compute_alpha_l(st));
        ++res.dual_updates;
      }
      const int u = select_neighbor(st);
      if (st.match_b[u] == kFree) {
        augment(st, u);
        ++res.augmentations;
        break;
      }
      extend_tree(st, w, u);
    }
  }

  auto& m = res.matching;
  m.match_of_a = st.match_a;
  m.match_of_b = st.match_b;
  for (int i = 0; i < n; ++i) {
    const int j = m.match_of_a[i];
    if (edge_slack(st, w, i, j) != 0) throw std::logic_error("hungarian: matched edge not tight");
    m.weight += w(i, j);
  }
  if (m.weight != label_sum(st))
    throw std::logic_error("hungarian: matching weight differs from the label sum");
  res.duals = std::move(st);
  return res;
}

}  // namespace gap::hungarian

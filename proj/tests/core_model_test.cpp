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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "gap/instance.hpp"
#include "gap/io.hpp"
#include "gap/random.hpp"
#include "test_support.hpp"

namespace gap {
namespace {

using testing::make_instance;

TEST(ValidateInstance, DemandBeyondOppositeSizeAndSum) {
  const auto inst = make_instance({{1, 1}}, {3}, {3}, {0, 0}, {1, 1});
  const auto rep = validate_instance(inst);
  EXPECT_FALSE(rep.feasible_necessary);
  EXPECT_TRUE(rep.has(rule::kADemandGtT));
  EXPECT_TRUE(rep.has(rule::kSumADemandGtSumBCapacity));
}

TEST(ValidateInstance, PermutationInstancePasses) {
  const auto rep = validate_instance(testing::one_to_one({{4, 2}, {7, 1}}));
  EXPECT_TRUE(rep.feasible_necessary);
  EXPECT_TRUE(rep.violations.empty());
}

TEST(ValidateInstance, DemandAboveCapacity) {
  const auto inst = make_instance({{1}, {1}}, {1, 1}, {1, 1}, {2}, {1});
  const auto rep = validate_instance(inst);
  EXPECT_TRUE(rep.has(rule::kBDemandGtCapacity));
  EXPECT_FALSE(rep.feasible_necessary);
}

TEST(ValidateInstance, StructuralProblems) {
  auto inst = make_instance({{1, -2}}, {0}, {1}, {0, 0}, {1, 1});
  EXPECT_TRUE(validate_instance(inst).has(rule::kNegativeCost));
  inst.b_demand.pop_back();
  EXPECT_TRUE(validate_instance(inst).has(rule::kDimension));
}

TEST(ValidateInstance, FlagMatchesViolationList) {
  Rng rng(3);
  GenParams p;
  for (int k = 0; k < 300; ++k) {
    const auto rep = validate_instance(random_instance(p, rng));
    EXPECT_EQ(rep.feasible_necessary, rep.violations.empty());
  }
}

TEST(NormalizeInstance, ClipsCapacities) {
  const auto inst = make_instance({{1, 2}, {3, 4}}, {1, 1}, {5, 5}, {1, 1}, {1, 1});
  const auto norm = normalize_instance(inst);
  EXPECT_EQ(norm.a_capacity, (std::vector<int>{2, 2}));
  EXPECT_EQ(norm.cost, inst.cost);
  EXPECT_EQ(norm.a_demand, inst.a_demand);
  EXPECT_EQ(norm.b_capacity, inst.b_capacity);

  const auto one = make_instance({{1, 2}}, {1}, {1}, {0, 0}, {9, 1});
  EXPECT_EQ(normalize_instance(one).b_capacity, (std::vector<int>{1, 1}));
}

TEST(NormalizeInstance, IdempotentOnRandomInstances) {
  Rng rng(11);
  GenParams p;
  p.cap_max = 9;
  for (int k = 0; k < 200; ++k) {
    auto inst = random_instance(p, rng);
    for (auto& d : inst.a_demand) d = std::min(d, inst.t);
    for (auto& d : inst.b_demand) d = std::min(d, inst.s);
    const auto once = normalize_instance(inst);
    EXPECT_EQ(normalize_instance(once), once);
  }
}

TEST(NormalizeInstance, RejectsUnfixableBounds) {
  const auto inst = make_instance({{1, 1}}, {3}, {3}, {0, 0}, {1, 1});
  EXPECT_THROW(normalize_instance(inst), InstanceError);
  const auto over = make_instance({{1}, {1}}, {1, 1}, {1, 1}, {2}, {1});
  EXPECT_THROW(normalize_instance(over), InstanceError);
}

TEST(AssignmentCost, Examples) {
  const auto inst = make_instance({{1, 2}, {3, 1}}, {1, 1}, {1, 1}, {1, 1}, {1, 1});
  const std::vector<Pair> diag{{0, 0}, {1, 1}};
  EXPECT_EQ(assignment_cost(inst, diag), 2);
  EXPECT_EQ(assignment_cost(inst, std::span<const Pair>{}), 0);
  const auto row = make_instance({{5, 7}}, {2}, {2}, {1, 1}, {1, 1});
  const std::vector<Pair> both{{0, 0}, {0, 1}};
  EXPECT_EQ(assignment_cost(row, both), 12);
}

TEST(AssignmentCost, Errors) {
  const auto inst = make_instance({{1, 2}}, {1}, {2}, {0, 0}, {1, 1});
  const std::vector<Pair> bad{{0, 2}};
  EXPECT_THROW(assignment_cost(inst, bad), std::out_of_range);
  const std::vector<Pair> dup{{0, 1}, {0, 1}};
  EXPECT_THROW(assignment_cost(inst, dup), std::invalid_argument);
}

TEST(AssignmentCost, OrderDoesNotMatter) {
  Rng rng(5);
  GenParams p;
  p.max_s = 5;
  p.max_t = 5;
  for (int k = 0; k < 100; ++k) {
    const auto inst = random_instance(p, rng);
    std::vector<Pair> pairs;
    for (int i = 0; i < inst.s; ++i)
      for (int j = 0; j < inst.t; ++j)
        if (uniform_int(rng, 0, 1)) pairs.push_back({i, j});
    const Cost base = assignment_cost(inst, pairs);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    EXPECT_EQ(assignment_cost(inst, pairs), base);
  }
}

TEST(InstanceJson, RoundTripAndDigest) {
  const auto inst = make_instance({{1, 2}, {3, 1}}, {1, 0}, {2, 1}, {1, 1}, {1, 2});
  const auto back = instance_from_json(to_json(inst));
  EXPECT_EQ(back, inst);
  EXPECT_EQ(instance_digest(back), instance_digest(inst));
  EXPECT_EQ(instance_digest(inst).size(), 16u);
}

TEST(InstanceJson, RejectsMissingAndUnknownKeys) {
  auto j = to_json(testing::one_to_one({{1, 2}, {3, 1}}));
  auto missing = j;
  missing.erase("b_demand");
  try {
    instance_from_json(missing);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("b_demand"), std::string::npos);
  }
  auto extra = j;
  extra["weights"] = 1;
  EXPECT_THROW(instance_from_json(extra), ParseError);
}

TEST(InstanceJson, RejectsShortCostRow) {
  auto j = to_json(testing::one_to_one({{1, 2}, {3, 1}}));
  j["cost"][1] = {3};
  try {
    instance_from_json(j);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("\"cost\"[1]"), std::string::npos);
  }
}

}  // namespace
}  // namespace gap

//
// Copyright 2026 The impmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "impmech/game.h"

#include <vector>

#include "gtest/gtest.h"
#include "impmech/environment.h"
#include "impmech/random.h"
#include "impmech/status.h"

namespace impmech {
namespace {

// Agent 0's announcement picks the alternative and agent 0 always prefers
// alternative 1, so the low type gains by lying. Agent 1 is a bystander.
Environment LyingEnv(ValuesKind kind = ValuesKind::kPrivateValues) {
  EnvironmentSpec spec;
  spec.type_counts = {2, 2};
  spec.reaction_counts = {1, 1};
  spec.num_alternatives = 2;
  spec.values_kind = kind;
  spec.utility = [](int i, std::span<const int>, int s, int) {
    return i == 0 ? 1.0 * s : 0.5;
  };
  return *Environment::Create(std::move(spec));
}

const Mechanism kFollowAgentZero = [](std::span<const int> b) {
  return OutcomeDistribution::PointMass(2, b[0]);
};

TEST(StrategyTest, TruthfulAndAnnounce) {
  const Environment env = LyingEnv();
  const StrategyProfile truth = TruthfulStrategies(env);
  EXPECT_EQ(truth[0], (std::vector<int>{0, 1}));
  const StrategyProfile lie = {{1, 1}, {0, 1}};
  EXPECT_EQ(Announce(lie, std::vector<int>{0, 1}), (std::vector<int>{1, 1}));
  EXPECT_EQ(PropertyName(Property::kStrictlyDominant), "strictly_dominant");
}

TEST(ExPostNashTest, FindsAndReplaysTheProfitableLie) {
  const Environment env = LyingEnv();
  absl::StatusOr<VerificationReport> r =
      CheckExPostNashTruthful(kFollowAgentZero, env);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->pass);
  EXPECT_DOUBLE_EQ(r->margin, -1.0);
  EXPECT_EQ(r->witness.agent, 0);
  EXPECT_EQ(r->witness.types[0], 0);
  EXPECT_EQ(r->witness.deviation, 1);
  EXPECT_TRUE(ReplayWitness(kFollowAgentZero, env, r->witness));
  Witness forged = r->witness;
  forged.deviation_utility += 0.5;
  EXPECT_FALSE(ReplayWitness(kFollowAgentZero, env, forged));
}

TEST(ExPostNashTest, TheLyingProfileIsAnEquilibrium) {
  const StrategyProfile always_high = {{1, 1}, {0, 1}};
  absl::StatusOr<VerificationReport> r =
      CheckExPostNash(kFollowAgentZero, LyingEnv(), always_high);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->pass);
}

TEST(DominanceTest, ConstantMechanismIsWeaklyButNotStrictlyTruthful) {
  const Environment env = LyingEnv();
  const Mechanism constant = [](std::span<const int>) {
    return OutcomeDistribution::PointMass(2, 0);
  };
  absl::StatusOr<VerificationReport> weak =
      CheckDominantTruthful(constant, env, false);
  absl::StatusOr<VerificationReport> strict =
      CheckStrictlyDominantTruthful(constant, env);
  ASSERT_TRUE(weak.ok() && strict.ok());
  EXPECT_TRUE(weak->pass);
  EXPECT_FALSE(strict->pass);
  EXPECT_DOUBLE_EQ(strict->margin, 0.0);
}

TEST(DominanceTest, InterdependentValuesAreRefused) {
  const Environment env = LyingEnv(ValuesKind::kInterdependent);
  EXPECT_TRUE(
      HasErrorKind(CheckDominantTruthful(kFollowAgentZero, env, false).status(),
                   ErrorKind::kWrongValuesKind));
}

TEST(FindDominatingStrategyTest, AlwaysAnnouncingHighDominatesTruth) {
  const std::vector<int> truthful = {0, 1};
  absl::StatusOr<std::optional<std::vector<int>>> found =
      FindDominatingStrategy(kFollowAgentZero, LyingEnv(), 0, truthful);
  ASSERT_TRUE(found.ok());
  ASSERT_TRUE(found->has_value());
  EXPECT_EQ(**found, (std::vector<int>{1, 1}));
  // Nothing beats the dominant map itself.
  const std::vector<int> high = {1, 1};
  EXPECT_FALSE(
      FindDominatingStrategy(kFollowAgentZero, LyingEnv(), 0, high)->has_value());
}

TEST(ImplementationGapTest, ExhaustiveMatchesHandComputation) {
  const Environment env = LyingEnv();
  Objective f;
  f.eval = [](std::span<const int> t, int s) { return s == t[1] ? 1.0 : 0.0; };
  absl::StatusOr<ImplementationGapReport> r = ImplementationGap(
      kFollowAgentZero, env, f, TruthfulStrategies(env));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->exhaustive);
  EXPECT_EQ(r->profiles, 4u);
  EXPECT_DOUBLE_EQ(r->beta_measured, 1.0);  // t = (0, 1) picks s = 0

  RandomStream rng(3);
  const std::vector<TypeProfile> probes = DeterministicProbes(env, 10, rng);
  absl::StatusOr<ImplementationGapReport> probed = ImplementationGap(
      kFollowAgentZero, env, f, TruthfulStrategies(env), probes);
  ASSERT_TRUE(probed.ok());
  EXPECT_FALSE(probed->exhaustive);
  EXPECT_LE(probed->beta_measured, r->beta_measured);
}

}  // namespace
}  // namespace impmech

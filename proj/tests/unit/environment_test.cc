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

#include "impmech/environment.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "impmech/random.h"
#include "impmech/status.h"
#include "testing/random_instances.h"

namespace impmech {
namespace {

// Brute-force reference: lowest-index argmax written out independently.
int ArgmaxReaction(const Environment& env, int i, std::span<const int> t,
                   int s) {
  int best = 0;
  for (int r = 1; r < env.num_reactions(i); ++r) {
    if (env.Utility(i, t, s, r) > env.Utility(i, t, s, best) + 1e-12) best = r;
  }
  return best;
}

double GapOracle(const Environment& env) {
  const int n = env.num_agents();
  double gamma = std::numeric_limits<double>::infinity();
  std::vector<int> t(n, 0);
  do {
    for (int i = 0; i < n; ++i) {
      for (int b = 0; b < env.num_types(i); ++b) {
        if (b == t[i]) continue;
        std::vector<int> lie = t;
        lie[i] = b;
        double best = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < env.num_alternatives(); ++s) {
          const double truth = env.Utility(i, t, s, ArgmaxReaction(env, i, t, s));
          const double committed =
              env.Utility(i, t, s, ArgmaxReaction(env, i, lie, s));
          best = std::max(best, truth - committed);
        }
        gamma = std::min(gamma, best);
      }
    }
  } while (NextProfile(std::span<int>(t), env.type_counts()));
  return gamma;
}

// Two agents with two types; reaction r is right iff it equals the type on
// alternative 1, and reactions are irrelevant on alternative 0.
Environment MatchingEnv() {
  EnvironmentSpec spec;
  spec.type_counts = {2, 2};
  spec.reaction_counts = {2, 2};
  spec.num_alternatives = 2;
  spec.values_kind = ValuesKind::kPrivateValues;
  spec.utility = [](int i, std::span<const int> t, int s, int r) {
    if (s == 0) return 0.5;
    return r == t[i] ? 1.0 : 0.0;
  };
  return *Environment::Create(std::move(spec));
}

TEST(EnvironmentTest, CreateRejectsMalformedSpecs) {
  EnvironmentSpec empty;
  EXPECT_FALSE(Environment::Create(empty).ok());

  EnvironmentSpec mismatch;
  mismatch.type_counts = {2, 2};
  mismatch.reaction_counts = {1};
  mismatch.num_alternatives = 1;
  mismatch.utility = [](int, std::span<const int>, int, int) { return 0.0; };
  EXPECT_FALSE(Environment::Create(mismatch).ok());

  EnvironmentSpec no_utility;
  no_utility.type_counts = {2};
  no_utility.reaction_counts = {1};
  no_utility.num_alternatives = 1;
  EXPECT_FALSE(Environment::Create(no_utility).ok());
}

TEST(NormalizationTest, CoveringMapsTheRangeOntoTheUnitInterval) {
  const UtilityNormalization norm = UtilityNormalization::Covering(-3.0, 5.0);
  EXPECT_DOUBLE_EQ(norm.FromRaw(-3.0), 0.0);
  EXPECT_DOUBLE_EQ(norm.FromRaw(5.0), 1.0);
  EXPECT_DOUBLE_EQ(norm.ToRaw(norm.FromRaw(1.25)), 1.25);
}

TEST(EnvironmentTest, OptimalReactionBreaksTiesLow) {
  const Environment env = MatchingEnv();
  const std::vector<int> t = {1, 0};
  EXPECT_EQ(OptimalReaction(env, 0, t, 0), 0);
  EXPECT_EQ(OptimalReaction(env, 0, t, 1), 1);
  EXPECT_EQ(OptimalReactionSet(env, 0, t, 0), (std::vector<int>{0, 1}));
  const std::vector<int> only_high = {1};
  EXPECT_EQ(OptimalReaction(env, 0, t, 0, only_high), 1);
  EXPECT_DOUBLE_EQ(BestUtility(env, 0, t, 1), 1.0);
}

TEST(EnvironmentTest, ValuesKindIsVerified) {
  EXPECT_TRUE(VerifyValuesKind(MatchingEnv()).ok());
  EnvironmentSpec spec;
  spec.type_counts = {2, 2};
  spec.reaction_counts = {1, 1};
  spec.num_alternatives = 1;
  spec.values_kind = ValuesKind::kPrivateValues;
  // Depends on the other agent's type, so private values is false.
  spec.utility = [](int i, std::span<const int> t, int, int) {
    return 0.25 + 0.5 * t[1 - i];
  };
  EXPECT_FALSE(VerifyValuesKind(*Environment::Create(spec)).ok());
  spec.values_kind = ValuesKind::kInterdependent;
  EXPECT_TRUE(VerifyValuesKind(*Environment::Create(spec)).ok());
}

TEST(EnvironmentTest, UtilityOutsideTheUnitIntervalIsRejected) {
  EnvironmentSpec spec;
  spec.type_counts = {1};
  spec.reaction_counts = {1};
  spec.num_alternatives = 1;
  spec.utility = [](int, std::span<const int>, int, int) { return 1.5; };
  EXPECT_FALSE(VerifyValuesKind(*Environment::Create(spec)).ok());
}

TEST(GapTest, MatchesTheBruteForceOracleOnRandomInstances) {
  const RandomStream master(3);
  for (int k = 0; k < 60; ++k) {
    RandomStream rng = master.Split("gap", k);
    const testing::RandomInstance inst = testing::MakeRandomInstance(rng);
    bool any_pair = false;
    for (int c : inst.env.type_counts()) any_pair = any_pair || c > 1;
    if (!any_pair) continue;
    absl::StatusOr<Gap> gap = ComputeGap(inst.env);
    ASSERT_TRUE(gap.ok());
    EXPECT_NEAR(gap->gamma, GapOracle(inst.env), 1e-15) << "instance " << k;
  }
}

TEST(GapTest, MatchingEnvironmentHasUnitGap) {
  const Environment env = MatchingEnv();
  absl::StatusOr<Gap> gap = ComputeGap(env);
  ASSERT_TRUE(gap.ok());
  EXPECT_DOUBLE_EQ(gap->gamma, 1.0);
  // Restricted to the alternative where reactions do not matter, no
  // commitment hurts.
  const std::vector<int> flat = {0};
  EXPECT_DOUBLE_EQ(ComputeGap(env, {}, flat)->gamma, 0.0);
}

TEST(GapTest, BudgetIsEnforced) {
  absl::StatusOr<Gap> gap = ComputeGap(MatchingEnv(), EnumerationBudget{1});
  EXPECT_TRUE(HasErrorKind(gap.status(), ErrorKind::kEnumerationBudgetExceeded));
}

TEST(SeparationTest, FindsAndValidatesACertificate) {
  const Environment env = MatchingEnv();
  EXPECT_TRUE(Separates(env, 0, std::vector<int>{0, 0}, 0, 1, 1));
  EXPECT_FALSE(Separates(env, 0, std::vector<int>{0, 0}, 0, 1, 0));
  absl::StatusOr<SeparationCertificate> cert = FindSeparatingSet(env);
  ASSERT_TRUE(cert.ok());
  EXPECT_EQ(cert->separating_set, std::vector<int>{1});
  EXPECT_TRUE(ValidateCertificate(env, *cert));

  SeparationCertificate forged = *cert;
  forged.separating_set = {0};
  for (SeparationWitness& w : forged.witnesses) w.alternative = 0;
  EXPECT_FALSE(ValidateCertificate(env, forged));

  const std::vector<int> flat = {0};
  EXPECT_TRUE(HasErrorKind(FindSeparatingSet(env, {}, flat).status(),
                           ErrorKind::kNotNonTrivial));
}

TEST(SensitivityTest, ReportsTheTightestConstant) {
  const RandomStream master(4);
  for (int k = 0; k < 20; ++k) {
    RandomStream rng = master.Split("sens", k);
    const testing::RandomInstance inst = testing::MakeRandomInstance(rng);
    absl::StatusOr<SensitivityReport> r =
        VerifySensitivity(inst.objective, inst.env);
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r->pass);
    EXPECT_LE(r->tightest_d, inst.objective.sensitivity + 1e-12);
  }
  Objective loud;
  loud.sensitivity = 0.1;
  loud.eval = [](std::span<const int> t, int) { return 1.0 * t[0]; };
  absl::StatusOr<SensitivityReport> r = VerifySensitivity(loud, MatchingEnv());
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->pass);
  EXPECT_DOUBLE_EQ(r->tightest_d, 2.0);  // n * |1 - 0|
}

TEST(ObjectiveTest, AverageUtilityUsesBestReactions) {
  const Environment env = MatchingEnv();
  const Objective f = AverageUtilityObjective(env);
  EXPECT_DOUBLE_EQ(f(std::vector<int>{0, 1}, 1), 1.0);
  EXPECT_DOUBLE_EQ(f(std::vector<int>{0, 1}, 0), 0.5);
  EXPECT_DOUBLE_EQ(f.sensitivity, 1.0);
}

}  // namespace
}  // namespace impmech

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

#include "impmech/exponential.h"

#include <cmath>
#include <limits>
#include <vector>

#include "boost/multiprecision/cpp_dec_float.hpp"
#include "gtest/gtest.h"
#include "impmech/random.h"
#include "impmech/status.h"
#include "testing/random_instances.h"

namespace impmech {
namespace {

using Big = boost::multiprecision::cpp_dec_float_50;

std::vector<Big> OracleSoftmax(const std::vector<double>& scores,
                               double rate) {
  std::vector<Big> weights;
  Big total = 0;
  for (double f : scores) {
    weights.push_back(boost::multiprecision::exp(Big(rate) * Big(f)));
    total += weights.back();
  }
  for (Big& w : weights) w /= total;
  return weights;
}

TEST(ExponentialDistributionTest, MatchesFiftyDigitOracle) {
  RandomStream rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int count = 2 + static_cast<int>(rng.UniformInt(7));
    std::vector<double> scores(count);
    for (double& f : scores) f = rng.Uniform(-1.0, 1.0);
    const double rate = std::pow(10.0, rng.Uniform(-2.0, 3.0));
    const OutcomeDistribution dist =
        ExponentialDistributionFromScores(scores, rate);
    const std::vector<Big> oracle = OracleSoftmax(scores, rate);
    ASSERT_EQ(dist.outcomes().size(), static_cast<std::size_t>(count));
    for (int s = 0; s < count; ++s) {
      const Outcome& o = dist.outcomes()[s];
      EXPECT_EQ(o.alternative, s);
      EXPECT_TRUE(o.imposed.empty());
      const double want = oracle[s].convert_to<double>();
      EXPECT_NEAR(o.probability, want, 1e-15 + 1e-13 * want);
      EXPECT_NEAR(o.log_probability, boost::multiprecision::log(oracle[s])
                                         .convert_to<double>(),
                  1e-10);
    }
  }
}

TEST(ExponentialDistributionTest, ExtremeRatesStayFinite) {
  const std::vector<double> scores = {0.0, 1.0, 1.0 - 1e-6};
  const OutcomeDistribution d =
      ExponentialDistributionFromScores(scores, 1e9);
  double total = 0.0;
  for (const Outcome& o : d.outcomes()) {
    EXPECT_TRUE(std::isfinite(o.log_probability) || o.probability == 0.0);
    total += o.probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(d.outcomes()[0].log_probability, -1e9, 1.0);
}

TEST(ExponentialDistributionTest, RateZeroIsUniform) {
  const std::vector<double> scores = {0.3, -2.0, 7.0, 1.0};
  const OutcomeDistribution d = ExponentialDistributionFromScores(scores, 0.0);
  for (const Outcome& o : d.outcomes()) {
    EXPECT_DOUBLE_EQ(o.probability, 0.25);
  }
}

TEST(PrivacyRateTest, IsNEpsOverTwoD) {
  EXPECT_DOUBLE_EQ(PrivacyRate(10, 0.5, 2.0), 1.25);
}

// Independent neighbour scan written directly from the definition.
double OracleEpsilon(const testing::RandomInstance& inst, double eps) {
  const Environment& env = inst.env;
  const double rate = PrivacyRate(env.num_agents(), eps,
                                  inst.objective.sensitivity);
  const ProfileSpace space = env.profile_space();
  double worst = 0.0;
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    const std::vector<int> t = space.Decode(idx);
    for (int i = 0; i < env.num_agents(); ++i) {
      for (int b = 0; b < env.num_types(i); ++b) {
        std::vector<int> u = t;
        u[i] = b;
        std::vector<double> ft, fu;
        for (int s = 0; s < env.num_alternatives(); ++s) {
          ft.push_back(inst.objective(t, s));
          fu.push_back(inst.objective(u, s));
        }
        const std::vector<Big> pt = OracleSoftmax(ft, rate);
        const std::vector<Big> pu = OracleSoftmax(fu, rate);
        for (int s = 0; s < env.num_alternatives(); ++s) {
          worst = std::max(worst, boost::multiprecision::abs(
                                      boost::multiprecision::log(pt[s] / pu[s]))
                                      .convert_to<double>());
        }
      }
    }
  }
  return worst;
}

TEST(AuditDpTest, AgreesWithTheOracleAndCertifiesTheTarget) {
  const RandomStream master(31);
  for (int k = 0; k < 25; ++k) {
    RandomStream rng = master.Split("dp", k);
    const testing::RandomInstance inst = testing::MakeRandomInstance(rng);
    for (double eps : {0.1, 1.0}) {
      absl::StatusOr<DpAuditReport> r = AuditDp(
          ExponentialMechanism(inst.objective, inst.env, eps), inst.env, eps,
          {{}, 2});
      ASSERT_TRUE(r.ok());
      EXPECT_TRUE(r->pass);
      EXPECT_FALSE(r->zero_probability_asymmetry);
      EXPECT_NEAR(r->epsilon_measured, OracleEpsilon(inst, eps), 1e-12);
    }
  }
}

TEST(AuditDpTest, ArgmaxMechanismIsFlagged) {
  EnvironmentSpec spec;
  spec.type_counts = {2, 2};
  spec.reaction_counts = {1, 1};
  spec.num_alternatives = 2;
  spec.utility = [](int, std::span<const int>, int, int) { return 0.0; };
  const Environment env = *Environment::Create(std::move(spec));
  // Picks the alternative named by agent 0, so one flip moves all the mass.
  const Mechanism argmax = [](std::span<const int> t) {
    return OutcomeDistribution::PointMass(2, t[0]);
  };
  absl::StatusOr<DpAuditReport> r = AuditDp(argmax, env, 1.0);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->zero_probability_asymmetry);
  EXPECT_FALSE(r->pass);
  EXPECT_TRUE(std::isinf(r->epsilon_measured));
  EXPECT_EQ(r->witness.agent, 0);
}

TEST(NearIndifferenceTest, SwingIsBelowExpm1Eps) {
  const RandomStream master(41);
  for (int k = 0; k < 25; ++k) {
    RandomStream rng = master.Split("swing", k);
    const testing::RandomInstance inst = testing::MakeRandomInstance(rng);
    for (double eps : {0.05, 0.5, 1.0}) {
      const Mechanism m = ExponentialMechanism(inst.objective, inst.env, eps);
      absl::StatusOr<NearIndifferenceReport> all = CheckNearIndifference(
          m, inst.env, eps, OpponentFamily::kAllAnnouncements);
      absl::StatusOr<NearIndifferenceReport> truthful =
          CheckNearIndifference(m, inst.env, eps, OpponentFamily::kTruthful);
      ASSERT_TRUE(all.ok() && truthful.ok());
      EXPECT_TRUE(all->pass && all->within_two_eps);
      EXPECT_DOUBLE_EQ(all->bound, std::expm1(eps));
      EXPECT_LE(truthful->max_swing, all->max_swing + 1e-15);
    }
  }
}

TEST(AccuracyBoundTest, MatchesTheClosedForm) {
  for (int n : {5, 50, 5000}) {
    for (double eps : {0.1, 0.7}) {
      const Big x = Big(n) * Big(eps) * 7 / (2 * Big(1.5));
      const Big want = 4 * Big(1.5) / (Big(n) * Big(eps)) *
                       boost::multiprecision::log(x);
      EXPECT_NEAR(ExpMechAccuracyBound(n, eps, 1.5, 7), want.convert_to<double>(),
                  1e-13);
    }
  }
}

TEST(AccuracyTest, HoldsWhenPopulationIsLargeEnough) {
  const RandomStream master(51);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    RandomStream rng = master.Split("acc", k);
    const testing::RandomInstance inst = testing::MakeRandomInstance(rng);
    absl::StatusOr<AccuracyReport> r =
        CheckAccuracyBound(inst.objective, inst.env, 1.0);
    if (!r.ok()) {
      EXPECT_TRUE(HasErrorKind(r.status(), ErrorKind::kPopulationTooSmall));
      continue;
    }
    ++checked;
    EXPECT_TRUE(r->pass);
    EXPECT_GE(r->worst_slack, -1e-12);
  }
  EXPECT_GT(checked, 0);
}

}  // namespace
}  // namespace impmech

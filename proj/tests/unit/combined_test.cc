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

#include "impmech/combined.h"

#include <cmath>
#include <numbers>

#include "boost/multiprecision/cpp_dec_float.hpp"
#include "gtest/gtest.h"
#include "impmech/commitment.h"
#include "impmech/facility.h"
#include "impmech/game.h"
#include "impmech/status.h"

namespace impmech {
namespace {

using Big = boost::multiprecision::cpp_dec_float_50;

struct Case {
  double d, gamma, p_tilde;
  int s_count;
};

constexpr Case kCases[] = {
    {1.0, 0.5, 0.5, 9}, {1.0, 0.5, 1.0 / 9, 9}, {2.0, 0.135, 0.2, 5},
    {0.5, 1.0, 0.25, 4}};

bool ConditionsHold(const Case& c, std::int64_t n) {
  const long double pg = static_cast<long double>(c.p_tilde) * c.gamma;
  const long double x = n;
  const long double k = 8.0L * c.d / pg;
  const long double e = std::numbers::e_v<long double>;
  return x >= k * std::log(pg * c.s_count / (2.0L * c.d)) &&
         x >= 4.0L * e * e * c.d / (pg * c.s_count) && x / std::log(x) > k;
}

TEST(ComputeN0Test, IsTheFirstNOfALinearScan) {
  for (const Case& c : kCases) {
    absl::StatusOr<std::int64_t> n0 =
        ComputeN0(c.d, c.gamma, c.p_tilde, c.s_count);
    ASSERT_TRUE(n0.ok());
    std::int64_t scan = 3;
    while (!ConditionsHold(c, scan)) ++scan;
    EXPECT_EQ(*n0, scan);
  }
}

TEST(ComputeN0Test, NonPositiveConstantsViolateTheContract) {
  EXPECT_TRUE(HasErrorKind(ComputeN0(1.0, 0.0, 0.5, 4).status(),
                           ErrorKind::kParamContractViolated));
  EXPECT_TRUE(HasErrorKind(ComputeN0(1.0, 0.5, 0.5, 1).status(),
                           ErrorKind::kParamContractViolated));
}

TEST(ScheduleParamsTest, MatchesFiftyDigitOracle) {
  for (const Case& c : kCases) {
    const std::int64_t n0 = *ComputeN0(c.d, c.gamma, c.p_tilde, c.s_count);
    for (std::int64_t n : {n0 + 1, 10 * n0, 1000 * n0}) {
      absl::StatusOr<MechanismParams> p =
          ScheduleParams(c.d, c.gamma, c.p_tilde, c.s_count, n);
      ASSERT_TRUE(p.ok());
      const Big pg = Big(c.p_tilde) * Big(c.gamma);
      const Big log_term = boost::multiprecision::log(
          Big(n) * pg * c.s_count / (2 * Big(c.d)));
      const Big eps = boost::multiprecision::sqrt(pg * Big(c.d) / Big(n)) *
                      boost::multiprecision::sqrt(log_term);
      const Big beta =
          6 * boost::multiprecision::sqrt(Big(c.d) / (pg * Big(n))) *
          boost::multiprecision::sqrt(log_term);
      EXPECT_NEAR(p->eps, eps.convert_to<double>(), 1e-15);
      EXPECT_NEAR(p->q, (2 * eps / pg).convert_to<double>(), 1e-13);
      EXPECT_NEAR(p->beta_bound, beta.convert_to<double>(), 1e-13);
      EXPECT_EQ(p->n0, n0);
      // The schedule's premises hold at every point above n0.
      EXPECT_TRUE(CheckSchedule(*p).all()) << "n=" << n;
      EXPECT_NEAR(p->q * pg.convert_to<double>(), 2.0 * p->eps, 1e-15);
    }
    EXPECT_TRUE(HasErrorKind(
        ScheduleParams(c.d, c.gamma, c.p_tilde, c.s_count, n0).status(),
        ErrorKind::kPopulationTooSmall));
  }
}

TEST(ScheduleParamsTest, BetaMatchesTheImplementationBound) {
  const MechanismParams p = *ScheduleParams(1.0, 0.5, 0.5, 9, 1000);
  EXPECT_DOUBLE_EQ(*ImplementationBound(p, 1000), p.beta_bound);
  EXPECT_LT(*ImplementationBound(p, 4000), p.beta_bound);
}

TEST(TruthfulnessParamsTest, SitsOnTheTruthfulnessBoundary) {
  absl::StatusOr<MechanismParams> p =
      TruthfulnessParams(1.0, 0.5, 0.5, 9, 3, 0.0625);
  ASSERT_TRUE(p.ok());
  EXPECT_DOUBLE_EQ(p->q, 0.5);
  EXPECT_TRUE(std::isinf(p->beta_bound));
  EXPECT_TRUE(HasErrorKind(TruthfulnessParams(1.0, 0.5, 0.5, 9, 3, 0.2).status(),
                           ErrorKind::kParamContractViolated));
}

TEST(CombinedMechanismTest, ContractIsEnforced) {
  const GridFacilityInstance inst = *BuildGridFacilityEnv(3, 2, 2);
  const CommitmentDistribution p = *Loc2Commitment(inst);
  MechanismParams params = *TruthfulnessParams(1.0, 0.5, 0.5, 9, 3, 0.0625);
  EXPECT_TRUE(CombinedMechanism(inst.objective, inst.env, p, params).ok());
  params.q *= 0.9;
  EXPECT_TRUE(HasErrorKind(
      CombinedMechanism(inst.objective, inst.env, p, params).status(),
      ErrorKind::kParamContractViolated));
  const MechanismParams scheduled = *ScheduleParams(1.0, 0.5, 0.5, 9, 200);
  EXPECT_TRUE(HasErrorKind(
      CombinedMechanism(inst.objective, inst.env, p, scheduled).status(),
      ErrorKind::kPopulationTooSmall));
}

TEST(CombinedMechanismTest, BoundaryWeightMakesTruthStrictlyDominant) {
  for (int m : {1, 2, 3}) {
    const GridFacilityInstance inst = *BuildGridFacilityEnv(3, m, 2);
    const CommitmentDistribution p = *Loc2Commitment(inst);
    const double pg = p.p_tilde * inst.declared_gamma;
    const MechanismParams params = *TruthfulnessParams(
        1.0, inst.declared_gamma, p.p_tilde, inst.env.num_alternatives(), 3,
        pg / 2.0);  // q = 1 boundary
    const Mechanism mech = *CombinedMechanism(inst.objective, inst.env, p, params);
    absl::StatusOr<VerificationReport> r =
        CheckStrictlyDominantTruthful(mech, inst.env);
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r->pass) << "m=" << m;
  }
}

TEST(MixtureTest, EndpointsReturnOneComponent) {
  const Mechanism a = [](std::span<const int>) {
    return OutcomeDistribution::PointMass(2, 0);
  };
  const Mechanism b = [](std::span<const int>) {
    return OutcomeDistribution::PointMass(2, 1);
  };
  const std::vector<int> t = {0};
  EXPECT_DOUBLE_EQ(Mixture(0.0, a, b)(t).AlternativeMarginal()[0], 1.0);
  EXPECT_DOUBLE_EQ(Mixture(1.0, a, b)(t).AlternativeMarginal()[1], 1.0);
  EXPECT_DOUBLE_EQ(Mixture(0.3, a, b)(t).AlternativeMarginal()[1], 0.3);
}

TEST(UniformCommitmentBoundTest, ClosedForm) {
  const double want = 6.0 * std::sqrt(1.0 * 9 / (0.5 * 1000)) *
                      std::sqrt(std::log(1000 * 0.5 / 2.0));
  EXPECT_DOUBLE_EQ(UniformCommitmentBound(1.0, 0.5, 9, 1000), want);
}

}  // namespace
}  // namespace impmech

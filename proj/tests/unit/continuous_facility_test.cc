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

#include "impmech/continuous_facility.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "boost/multiprecision/cpp_dec_float.hpp"
#include "gtest/gtest.h"
#include "impmech/random.h"
#include "impmech/status.h"

namespace impmech {
namespace {

using Big = boost::multiprecision::cpp_dec_float_50;

std::vector<double> RandomPoints(RandomStream& rng, int count) {
  std::vector<double> out(count);
  for (double& x : out) x = rng.Uniform();
  return out;
}

TEST(SortedLocationsTest, AgreesWithDirectEvaluation) {
  RandomStream rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> t =
        RandomPoints(rng, 1 + static_cast<int>(rng.UniformInt(40)));
    const std::vector<double> f =
        RandomPoints(rng, 1 + static_cast<int>(rng.UniformInt(4)));
    const SortedLocations sorted(t);
    EXPECT_NEAR(sorted.Objective(f), DirectFacilityObjective(t, f), 1e-13);
  }
  EXPECT_DOUBLE_EQ(NearestFacility(0.5, std::vector<double>{0.25, 0.75}), 0.25);
}

TEST(FacilityGridTest, ResolutionIsValidated) {
  EXPECT_FALSE(FacilityGrid::Create(1, 0.3).ok());
  EXPECT_FALSE(FacilityGrid::Create(1, 2.0).ok());
  EXPECT_TRUE(HasErrorKind(FacilityGrid::Create(3, 1.0 / 1024).status(),
                           ErrorKind::kResolutionBudgetExceeded));
  const FacilityGrid grid = *FacilityGrid::Create(2, 0.25);
  EXPECT_EQ(grid.points_per_axis(), 5);
  EXPECT_EQ(grid.size(), 25u);
  for (std::uint64_t s = 0; s < grid.size(); ++s) {
    for (double x : grid.Facilities(s)) {
      EXPECT_DOUBLE_EQ(std::fmod(x, 0.25), 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(GridExpMechTest, ConcentratesAtHighRate) {
  const FacilityGrid grid = *FacilityGrid::Create(1, 1.0 / 64);
  const std::vector<double> t = {0.5};
  const std::vector<double> scores = grid.Objectives(SortedLocations(t));
  const GridExpMech d = GridExpMechFromObjectives(scores, 200.0);
  double near = 0.0;
  for (std::uint64_t s = 0; s < grid.size(); ++s) {
    if (std::abs(grid.Facilities(s)[0] - 0.5) <= 2 * grid.rho() + 1e-15) {
      near += d.probabilities[s];
    }
  }
  EXPECT_GT(near, 0.99);
  for (double p : GridExpMechFromObjectives(scores, 0.0).probabilities) {
    EXPECT_DOUBLE_EQ(p, 1.0 / grid.size());
  }
}

TEST(GridExpMechTest, SamplesFollowTheDistribution) {
  const FacilityGrid grid = *FacilityGrid::Create(1, 0.25);
  const std::vector<double> t = {0.1, 0.2, 0.9};
  const GridExpMech d = *ContinuousExpMechDistribution(grid, t, 1.0);
  // 20 independent chi-square tests; 4 dof, 0.99 quantile 13.28.
  int rejections = 0;
  for (int seed = 1; seed <= 20; ++seed) {
    RandomStream rng = RandomStream(3).Split("chi2", seed);
    std::vector<int> counts(grid.size());
    constexpr int kDraws = 20000;
    for (int k = 0; k < kDraws; ++k) {
      const double x = SampleGridExpMech(grid, d, rng)[0];
      ++counts[static_cast<int>(std::lround(x / 0.25))];
    }
    double chi2 = 0.0;
    for (std::uint64_t s = 0; s < grid.size(); ++s) {
      const double e = d.probabilities[s] * kDraws;
      chi2 += (counts[s] - e) * (counts[s] - e) / e;
    }
    if (chi2 > 13.28) ++rejections;
  }
  EXPECT_LE(rejections, 2);
}

// Midpoint quadrature on a fine mesh of Y, written from the sampling rule.
double LossOracle(int m_bar, double t, double b) {
  constexpr int kSteps = 200000;
  double total = 0.0;
  for (int x = 1; x <= m_bar; ++x) {
    const double h = std::ldexp(1.0, -x);
    double sum = 0.0;
    for (int j = 0; j < kSteps; ++j) {
      const double a = (j + 0.5) / kSteps * (1.0 - h);
      auto site = [&](double v) { return v <= a + h / 2 ? a : a + h; };
      sum += std::abs(t - site(b)) - std::abs(t - site(t));
    }
    total += sum / kSteps;
  }
  return total / m_bar;
}

TEST(DyadicCommitmentTest, ExactLossMatchesQuadrature) {
  RandomStream rng(81);
  for (int m_bar = 1; m_bar <= 4; ++m_bar) {
    const DyadicCommitment c = *DyadicCommitment::Create(m_bar, 2);
    for (int k = 0; k < 6; ++k) {
      const double t = rng.Uniform(), b = rng.Uniform();
      // The piecewise integrand jumps, so the midpoint sum is only good to
      // about one step.
      EXPECT_NEAR(c.ExpectedLoss(t, b), LossOracle(m_bar, t, b), 2e-6)
          << "m_bar=" << m_bar << " t=" << t << " b=" << b;
    }
    EXPECT_DOUBLE_EQ(c.ExpectedLoss(0.3, 0.3), 0.0);
  }
}

TEST(DyadicCommitmentTest, LossBoundHoldsInBothDirections) {
  for (int m_bar = 1; m_bar <= 5; ++m_bar) {
    const DyadicCommitment c = *DyadicCommitment::Create(m_bar, 2);
    const double min_gap = std::ldexp(1.0, -(m_bar - 1));
    constexpr int kMesh = 65;
    for (int i = 0; i < kMesh; ++i) {
      for (int j = 0; j < kMesh; ++j) {
        const double t = i / (kMesh - 1.0), b = j / (kMesh - 1.0);
        const double delta = std::abs(t - b);
        if (delta < min_gap) continue;
        EXPECT_GE(c.ExpectedLoss(t, b), delta * delta / (8.0 * m_bar) - 1e-10);
      }
    }
  }
}

TEST(DyadicCommitmentTest, FavorableEventCarriesTheLoss) {
  RandomStream rng(82);
  for (int m_bar = 1; m_bar <= 5; ++m_bar) {
    const DyadicCommitment c = *DyadicCommitment::Create(m_bar, 2);
    const double min_gap = std::ldexp(1.0, -(m_bar - 1));
    for (int k = 0; k < 400; ++k) {
      const double delta = rng.Uniform(min_gap, 1.0);
      const double lo = rng.Uniform(0.0, 1.0 - delta);
      const bool below = k % 2 == 0;
      const double t = below ? lo + delta : lo, b = below ? lo : lo + delta;
      const DyadicCommitment::FavorableEvent e = c.Favorable(t, b);
      EXPECT_GE(e.probability, delta / (2.0 * m_bar) - 1e-12);
      EXPECT_GE(e.min_loss, delta / 4.0 - 1e-12);
      EXPECT_GE(c.ExpectedLoss(t, b), e.probability * e.min_loss - 1e-12);
    }
  }
}

TEST(DyadicCommitmentTest, SamplesAreAdjacentDyadicSites) {
  const DyadicCommitment c = *DyadicCommitment::Create(3, 2);
  RandomStream rng(83);
  for (int k = 0; k < 1000; ++k) {
    const std::vector<double> s = c.Sample(rng);
    ASSERT_EQ(s.size(), 2u);
    const double gap = s[1] - s[0];
    const double level = std::round(-std::log2(gap));
    EXPECT_GE(level, 1.0);
    EXPECT_LE(level, 3.0);
    EXPECT_NEAR(gap, std::ldexp(1.0, -static_cast<int>(level)), 1e-15);
    EXPECT_GE(s[0], 0.0);
    EXPECT_LE(s[1], 1.0);
  }
  EXPECT_FALSE(DyadicCommitment::Create(0, 2).ok());
  EXPECT_FALSE(DyadicCommitment::Create(2, 1).ok());
}

TEST(Loc3ParamsTest, MatchesFiftyDigitOracle) {
  const std::int64_t n = 1'000'000;
  const int k = 2;
  const Loc3Params p = ComputeLoc3Params(n, k);
  const Big bn(n), root = boost::multiprecision::sqrt(Big(k + 1));
  const Big eps = boost::multiprecision::pow(bn, Big(-2) / 3) * root;
  EXPECT_NEAR(p.eps, eps.convert_to<double>(), 1e-18);
  const Big raw = boost::multiprecision::ceil(boost::multiprecision::log2(
      boost::multiprecision::cbrt(bn) / (6 * root * boost::multiprecision::log(bn))));
  EXPECT_DOUBLE_EQ(p.m_bar_raw, raw.convert_to<double>());
  EXPECT_EQ(p.m_bar, std::max(1, raw.convert_to<int>()));
  const Big q = 16 * eps * p.m_bar * boost::multiprecision::pow(Big(2), p.m_bar);
  EXPECT_NEAR(p.q, q.convert_to<double>(), 1e-15);
  const Big ne = bn * eps;
  const Big alpha = 2 / ne * boost::multiprecision::log(
                                 boost::multiprecision::exp(Big(1)) +
                                 boost::multiprecision::pow(ne, k + 1));
  EXPECT_NEAR(p.alpha, alpha.convert_to<double>(), 1e-14);
  EXPECT_TRUE(Loc3DominationHolds(p));
}

TEST(Loc3ParamsTest, ThresholdSeparatesFailingAndHoldingN) {
  for (int k : {1, 2}) {
    const std::int64_t n0 = *Loc3N0(k);
    EXPECT_FALSE(Loc3ConditionsHold(ComputeLoc3Params(n0, k)));
    EXPECT_TRUE(Loc3ConditionsHold(ComputeLoc3Params(n0 + 1, k)));
    EXPECT_TRUE(Loc3ConditionsHold(ComputeLoc3Params(4 * n0, k)));
    EXPECT_TRUE(HasErrorKind(Loc3Mechanism::Create(n0, k).status(),
                             ErrorKind::kPopulationTooSmall));
  }
}

TEST(ContinuousDeviationTest, DeviationGainIsBoundedByTwoEpsDistance) {
  const FacilityGrid grid = *FacilityGrid::Create(1, 1.0 / 256);
  RandomStream rng(91);
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<double> t =
        RandomPoints(rng, 2 + static_cast<int>(rng.UniformInt(5)));
    const double eps = rng.Uniform(0.05, 1.0);
    const double b = rng.Uniform();
    absl::StatusOr<double> gain = ContinuousDeviationGain(grid, t, 0, b, eps);
    ASSERT_TRUE(gain.ok());
    EXPECT_LE(*gain, 2.0 * eps * std::abs(t[0] - b) + 1e-12);
  }
}

TEST(LipschitzTest, BothInequalitiesHold) {
  const FacilityGrid grid = *FacilityGrid::Create(1, 1.0 / 256);
  RandomStream rng(92);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.UniformInt(6));
    const std::vector<double> t = RandomPoints(rng, n);
    std::vector<double> b = t;
    const double beta = rng.Uniform(0.0, 0.1);
    for (double& x : b) x = std::clamp(x + rng.Uniform(-beta, beta), 0.0, 1.0);
    absl::StatusOr<LipschitzReport> r = LipschitzChecks(t, b, grid, 1000, rng);
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r->pointwise_pass);
    EXPECT_TRUE(r->max_pass);
  }
  const std::vector<double> same = {0.2, 0.7};
  absl::StatusOr<LipschitzReport> r = LipschitzChecks(same, same, grid, 10, rng);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->max_difference, 0.0);
}

TEST(FacilityAccuracyTest, GridMechanismIsWithinTheBound) {
  const FacilityGrid grid = *FacilityGrid::Create(1, 1.0 / 256);
  RandomStream rng(93);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 20 + static_cast<int>(rng.UniformInt(200));
    const std::vector<double> t = RandomPoints(rng, n);
    const double eps = rng.Uniform(0.2, 1.0);
    const std::vector<double> scores = grid.Objectives(SortedLocations(t));
    const GridExpMech d = *ContinuousExpMechDistribution(grid, t, eps);
    double expected = 0.0, best = 0.0;
    for (std::size_t s = 0; s < scores.size(); ++s) {
      expected += d.probabilities[s] * scores[s];
      best = std::max(best, scores[s]);
    }
    EXPECT_GE(expected, best - FacilityAccuracyBound(n, eps, 1) - 1e-12);
  }
}

}  // namespace
}  // namespace impmech

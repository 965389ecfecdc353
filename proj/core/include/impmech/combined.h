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

#ifndef IMPMECH_COMBINED_H_
#define IMPMECH_COMBINED_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "impmech/commitment.h"
#include "impmech/environment.h"
#include "impmech/outcome.h"

namespace impmech {

struct MechanismParams {
  double eps = 0.0;
  double q = 0.0;
  double p_tilde = 0.0;
  double gamma = 0.0;
  double d = 1.0;
  int s_count = 0;
  std::int64_t n = 0;
  std::int64_t n0 = 0;
  // +infinity when no accuracy guarantee applies.
  double beta_bound = 0.0;
};

// Smallest n0 >= 3 with
//   n0 >= max{(8d / p~g) ln(p~g|S| / 2d), 4e^2 d / (p~g|S|)} and
//   n0 / ln n0 > 8d / p~g.
absl::StatusOr<std::int64_t> ComputeN0(double d, double gamma, double p_tilde,
                                       int s_count);

// eps = sqrt(p~g d / n) sqrt(ln(n p~g |S| / 2d)), q = 2 eps / p~g,
// beta_bound = 6 sqrt(d / (p~g n)) sqrt(ln(n p~g |S| / 2d)).
// kPopulationTooSmall when n <= n0.
absl::StatusOr<MechanismParams> ScheduleParams(double d, double gamma,
                                               double p_tilde, int s_count,
                                               std::int64_t n);

// Smallest mixing weight that keeps truth an equilibrium at a chosen eps:
// q = 2 eps / p~g. No population requirement; beta_bound = +infinity.
// kParamContractViolated when that q exceeds 1.
absl::StatusOr<MechanismParams> TruthfulnessParams(double d, double gamma,
                                                   double p_tilde, int s_count,
                                                   std::int64_t n, double eps);

struct ScheduleCheck {
  bool q_below_one = false;
  bool eps_below_gap = false;  // eps < p~g
  bool population_ok = false;  // n > 2ed / (eps |S|)
  bool all() const { return q_below_one && eps_below_gap && population_ok; }
};

ScheduleCheck CheckSchedule(const MechanismParams& params);

// Accuracy bound at `n` for the scheduled params; kPopulationTooSmall when
// n <= params.n0.
absl::StatusOr<double> ImplementationBound(const MechanismParams& params,
                                           std::int64_t n);

// 6 sqrt(d |S| / (g n)) sqrt(ln(n g / 2d)): the uniform-P form.
double UniformCommitmentBound(double d, double gamma, int s_count, std::int64_t n);

// (1 - q) a + q b.
Mechanism Mixture(double q, Mechanism a, Mechanism b);

// (1 - q) exponential mechanism at rate n eps / 2d + q M^P.
// kParamContractViolated unless q p~ g >= 2 eps and 0 < q <= 1;
// kPopulationTooSmall when n <= n0.
absl::StatusOr<Mechanism> CombinedMechanism(
    const Objective& objective, const Environment& env,
    const CommitmentDistribution& commitment, const MechanismParams& params);

}  // namespace impmech

#endif  // IMPMECH_COMBINED_H_

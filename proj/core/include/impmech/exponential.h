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

#ifndef IMPMECH_EXPONENTIAL_H_
#define IMPMECH_EXPONENTIAL_H_

#include <span>

#include "absl/status/statusor.h"
#include "impmech/environment.h"
#include "impmech/outcome.h"

namespace impmech {

// Weight exp(rate * F(t, s)) per alternative, normalized with a max shift.
// Non-imposing.
OutcomeDistribution ExponentialDistribution(const Objective& objective,
                                            int num_alternatives,
                                            std::span<const int> types,
                                            double rate);

// Same from precomputed objective values.
OutcomeDistribution ExponentialDistributionFromScores(
    std::span<const double> scores, double rate);

// Rate n * eps / (2d) that makes the mechanism eps-private for a
// d-sensitive objective.
double PrivacyRate(int n, double eps, double sensitivity);

// Exponential mechanism at PrivacyRate(n, eps, F.sensitivity).
Mechanism ExponentialMechanism(const Objective& objective,
                               const Environment& env, double eps);

struct DpWitness {
  int agent = -1;
  TypeProfile types;
  int alternate_type = -1;
  int alternative = -1;
};

struct DpAuditReport {
  double epsilon_measured = 0.0;
  double target_eps = 0.0;
  bool pass = false;
  // Set when some ratio has exactly one zero side; epsilon_measured is then
  // +infinity and the witness points at it.
  bool zero_probability_asymmetry = false;
  DpWitness witness;
  std::uint64_t pairs_checked = 0;
};

// Max |log M(t)(s) - log M(t^)(s)| over all neighbouring profiles and
// alternatives; pass iff <= target + 1e-9.
absl::StatusOr<DpAuditReport> AuditDp(const Mechanism& mechanism,
                                      const Environment& env,
                                      double target_eps,
                                      const VerifyOptions& options = {});

struct SwingWitness {
  int agent = -1;
  TypeProfile types;     // true profile
  TypeProfile announced; // opponents' announcements
  int misreport = -1;
  double truthful_utility = 0.0;
  double deviation_utility = 0.0;
};

struct NearIndifferenceReport {
  double max_swing = 0.0;
  double bound = 0.0;  // e^eps - 1
  bool pass = false;
  bool within_two_eps = false;
  SwingWitness witness;
};

// Which opponent announcements the swing check ranges over.
enum class OpponentFamily {
  kTruthful,          // b_{-i} = t_{-i}
  kAllAnnouncements,  // every b_{-i}
};

// For every agent, true profile and unilateral change of that agent's
// announcement: |E u_i before - E u_i after| <= e^eps - 1 (+1e-12).
absl::StatusOr<NearIndifferenceReport> CheckNearIndifference(
    const Mechanism& mechanism, const Environment& env, double eps,
    OpponentFamily family = OpponentFamily::kTruthful,
    const VerifyOptions& options = {});

// (4d / (n eps)) ln(n eps |S| / (2d)).
double ExpMechAccuracyBound(int n, double eps, double sensitivity, int num_alternatives);

struct AccuracyReport {
  double bound = 0.0;
  // min over t of E[F] - (max F - bound); non-negative on pass.
  double worst_slack = 0.0;
  TypeProfile worst_types;
  bool pass = false;
};

// E over the exponential mechanism of F(t, .) >= max_s F(t, s) - bound for
// every t. kPopulationTooSmall unless n > 2ed / (eps |S|).
absl::StatusOr<AccuracyReport> CheckAccuracyBound(
    const Objective& objective, const Environment& env, double eps,
    const VerifyOptions& options = {});

}  // namespace impmech

#endif  // IMPMECH_EXPONENTIAL_H_

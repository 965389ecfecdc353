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

#ifndef IMPMECH_OUTCOME_H_
#define IMPMECH_OUTCOME_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "impmech/enumeration.h"
#include "impmech/environment.h"
#include "impmech/random.h"

namespace impmech {

// Marker in Outcome::imposed for an agent whose reactions are not restricted.
inline constexpr int kUnrestricted = -1;

// One atom of a mechanism's output: an alternative plus, optionally, a forced
// reaction per agent.
struct Outcome {
  int alternative = 0;
  double probability = 0.0;
  double log_probability = 0.0;
  // Empty means non-imposing. Otherwise one entry per agent: the single
  // allowed reaction, or kUnrestricted.
  std::vector<int> imposed;

  bool imposes(int agent) const {
    return !imposed.empty() && imposed[agent] != kUnrestricted;
  }
};

// Exact finite distribution over (alternative, restriction) outcomes. The
// outcome order is the sampling order.
class OutcomeDistribution {
 public:
  OutcomeDistribution() = default;
  explicit OutcomeDistribution(int num_alternatives)
      : num_alternatives_(num_alternatives) {}

  static OutcomeDistribution PointMass(int num_alternatives, int alternative);

  // Pointwise (1 - q) * a + q * b; outcomes of `a` come first.
  static OutcomeDistribution Mix(double q, const OutcomeDistribution& a,
                                 const OutcomeDistribution& b);

  void Add(Outcome outcome) { outcomes_.push_back(std::move(outcome)); }

  int num_alternatives() const { return num_alternatives_; }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }

  // Probability of each alternative, summed over restrictions.
  std::vector<double> AlternativeMarginal() const;
  // Same in log space (-inf for zero mass); accurate for tiny masses.
  std::vector<double> LogAlternativeMarginal() const;
  // Total probability of outcomes that restrict at least one agent.
  double ImposedMass() const;

  // Non-negative masses summing to 1 within 1e-12; forced reactions valid.
  absl::Status Validate(const Environment& env) const;

 private:
  int num_alternatives_ = 0;
  std::vector<Outcome> outcomes_;
};

// A mechanism maps an announced type profile to an outcome distribution.
using Mechanism =
    std::function<OutcomeDistribution(std::span<const int> announced)>;

struct SampledOutcome {
  int alternative = 0;
  std::vector<int> imposed;
};

// Inverse-CDF draw over the stored outcome order.
SampledOutcome Sample(const OutcomeDistribution& dist, RandomStream& stream);

// Expected utility of `agent` with true profile `types` when the mechanism
// returned `dist`. A free agent plays its best reaction for the true profile;
// an imposed agent plays the forced reaction.
double ExpectedUtilityOf(const OutcomeDistribution& dist,
                         const Environment& env, int agent,
                         std::span<const int> types);

// Expected objective value under `dist`.
double ExpectedObjective(const OutcomeDistribution& dist,
                         const Objective& objective,
                         std::span<const int> types);

struct VerifyOptions {
  EnumerationBudget budget;
  int jobs = 1;
};

// Distribution at every profile of the environment's type space, indexed as
// the profile space. kEnumerationBudgetExceeded if |T| exceeds the budget.
absl::StatusOr<std::vector<OutcomeDistribution>> TabulateMechanism(
    const Mechanism& mechanism, const Environment& env,
    const VerifyOptions& options = {});

// Numerically stable log(exp(a) + exp(b)).
double LogAddExp(double a, double b);

}  // namespace impmech

#endif  // IMPMECH_OUTCOME_H_

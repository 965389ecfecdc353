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

#ifndef IMPMECH_PRICING_H_
#define IMPMECH_PRICING_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "impmech/environment.h"
#include "impmech/outcome.h"

namespace impmech {

// Digital-goods monopolist with cohort-interdependent valuations. Agents are
// grouped into `cohorts` blocks of `cohort_size`; agent k belongs to cohort
// k / cohort_size as member k % cohort_size.
struct PricingSpec {
  int cohorts = 1;
  int cohort_size = 1;
  int grid_m = 4;  // prices {0, 1/m, ..., 1}
  // Signal-space size of each cohort member (same across cohorts).
  std::vector<int> signal_counts;
  // Row r = cohort signal vector with index r (member 0 least significant);
  // row[d] = valuation of member d.
  std::vector<std::vector<double>> valuation_table;
};

// Binary signals with V_d = 0.05 + 0.8 x_d + 0.05 * mean of the other members'
// signals.
PricingSpec DefaultPricingSpec(int cohorts, int cohort_size, int grid_m);

struct PricingInstance {
  Environment env;
  Objective objective;
  std::vector<double> prices;  // per alternative
  int buy_reaction = 0;
  // Declared gap 1/m, in normalized utility units.
  double declared_gamma = 0.0;
  // Valuation of agent k at cohort signals implied by `types`.
  std::function<double(int agent, std::span<const int> types)> valuation;
};

// Reactions {NotBuy, Buy}; raw utility V - p for Buy, 0 otherwise, shifted
// and scaled into [0, 1]. F(t, p) = p / (ND) * #{V > p}; declared d = D.
// kGridTooCoarse when some member's own-signal change is not separated by a
// grid price with margin 2/m; InvalidArgument for non-monotone valuations.
absl::StatusOr<PricingInstance> BuildPricingEnv(const PricingSpec& spec);

// Example with valuations 0.5 + mu or 1 + mu and prices {0.5, 1}:
// F = max-style revenue per buyer with V >= p buying. Reactions {Buy,
// NotBuy}.
absl::StatusOr<PricingInstance> Example1Env(int n, double mu);

// Valuations 1/n or 1 + mu, prices {1/n, 1}.
absl::StatusOr<PricingInstance> Example3Env(int n, double mu);

// Picks the revenue-optimal price for the announcements (ties to the higher
// price). With probability `impose_weight` every agent is then forced to the
// optimal reaction for its announcement; otherwise reactions are free.
Mechanism Example3Mechanism(const PricingInstance& instance,
                            double impose_weight);

// Realized revenue per buyer: price times the fraction of agents that buy,
// given true types and the reactions played under `dist`.
double ExpectedRevenue(const OutcomeDistribution& dist,
                       const PricingInstance& instance,
                       std::span<const int> types);

}  // namespace impmech

#endif  // IMPMECH_PRICING_H_

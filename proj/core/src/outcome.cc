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

#include "impmech/outcome.h"

#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace impmech {

double LogAddExp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

OutcomeDistribution OutcomeDistribution::PointMass(int num_alternatives,
                                                   int alternative) {
  OutcomeDistribution dist(num_alternatives);
  dist.Add({alternative, 1.0, 0.0, {}});
  return dist;
}

OutcomeDistribution OutcomeDistribution::Mix(double q,
                                             const OutcomeDistribution& a,
                                             const OutcomeDistribution& b) {
  OutcomeDistribution mixed(a.num_alternatives());
  const double log_keep = std::log1p(-q);
  const double log_q = std::log(q);
  if (q < 1.0) {
    for (const Outcome& o : a.outcomes()) {
      mixed.Add({o.alternative, (1.0 - q) * o.probability,
                 log_keep + o.log_probability, o.imposed});
    }
  }
  if (q > 0.0) {
    for (const Outcome& o : b.outcomes()) {
      mixed.Add({o.alternative, q * o.probability, log_q + o.log_probability,
                 o.imposed});
    }
  }
  return mixed;
}

std::vector<double> OutcomeDistribution::AlternativeMarginal() const {
  std::vector<double> marginal(num_alternatives_, 0.0);
  for (const Outcome& o : outcomes_) marginal[o.alternative] += o.probability;
  return marginal;
}

std::vector<double> OutcomeDistribution::LogAlternativeMarginal() const {
  std::vector<double> marginal(num_alternatives_,
                               -std::numeric_limits<double>::infinity());
  for (const Outcome& o : outcomes_) {
    if (o.probability <= 0.0 && o.log_probability ==
                                    -std::numeric_limits<double>::infinity()) {
      continue;
    }
    marginal[o.alternative] =
        LogAddExp(marginal[o.alternative], o.log_probability);
  }
  return marginal;
}

double OutcomeDistribution::ImposedMass() const {
  double mass = 0.0;
  for (const Outcome& o : outcomes_) {
    bool restricts = false;
    for (int r : o.imposed) restricts = restricts || r != kUnrestricted;
    if (restricts) mass += o.probability;
  }
  return mass;
}

absl::Status OutcomeDistribution::Validate(const Environment& env) const {
  double total = 0.0;
  for (const Outcome& o : outcomes_) {
    if (o.alternative < 0 || o.alternative >= env.num_alternatives()) {
      return absl::InvalidArgumentError(
          absl::StrCat("outcome alternative ", o.alternative, " out of range"));
    }
    if (!(o.probability >= 0.0)) {
      return absl::InvalidArgumentError("negative outcome probability");
    }
    if (!o.imposed.empty()) {
      if (static_cast<int>(o.imposed.size()) != env.num_agents()) {
        return absl::InvalidArgumentError("imposition vector has wrong size");
      }
      for (int i = 0; i < env.num_agents(); ++i) {
        if (o.imposed[i] != kUnrestricted &&
            (o.imposed[i] < 0 || o.imposed[i] >= env.num_reactions(i))) {
          return absl::InvalidArgumentError(
              absl::StrCat("forced reaction out of range for agent ", i));
        }
      }
    }
    total += o.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrCat("outcome masses sum to ", total));
  }
  return absl::OkStatus();
}

SampledOutcome Sample(const OutcomeDistribution& dist, RandomStream& stream) {
  const std::vector<Outcome>& outcomes = dist.outcomes();
  const double u = stream.Uniform();
  double cumulative = 0.0;
  std::size_t pick = outcomes.size() - 1;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    cumulative += outcomes[k].probability;
    if (u < cumulative) {
      pick = k;
      break;
    }
  }
  // Rounding can leave the tail short of 1; fall back to the last atom with
  // positive mass.
  while (pick > 0 && outcomes[pick].probability <= 0.0) --pick;
  return {outcomes[pick].alternative, outcomes[pick].imposed};
}

double ExpectedUtilityOf(const OutcomeDistribution& dist,
                         const Environment& env, int agent,
                         std::span<const int> types) {
  double total = 0.0;
  for (const Outcome& o : dist.outcomes()) {
    if (o.probability == 0.0) continue;
    const double u =
        o.imposes(agent)
            ? env.Utility(agent, types, o.alternative, o.imposed[agent])
            : BestUtility(env, agent, types, o.alternative);
    total += o.probability * u;
  }
  return total;
}

double ExpectedObjective(const OutcomeDistribution& dist,
                         const Objective& objective,
                         std::span<const int> types) {
  const std::vector<double> marginal = dist.AlternativeMarginal();
  double total = 0.0;
  for (std::size_t s = 0; s < marginal.size(); ++s) {
    if (marginal[s] > 0.0) {
      total += marginal[s] * objective(types, static_cast<int>(s));
    }
  }
  return total;
}

absl::StatusOr<std::vector<OutcomeDistribution>> TabulateMechanism(
    const Mechanism& mechanism, const Environment& env,
    const VerifyOptions& options) {
  const ProfileSpace space = env.profile_space();
  if (!space.indexable()) {
    return CheckBudget(std::numeric_limits<std::uint64_t>::max(),
                       options.budget, "mechanism tabulation");
  }
  if (absl::Status s =
          CheckBudget(space.size(), options.budget, "mechanism tabulation");
      !s.ok()) {
    return s;
  }
  std::vector<OutcomeDistribution> table(space.size());
  ParallelFor(space.size(), options.jobs,
              [&](std::uint64_t begin, std::uint64_t end) {
                TypeProfile t(env.num_agents());
                for (std::uint64_t idx = begin; idx < end; ++idx) {
                  space.Decode(idx, t);
                  table[idx] = mechanism(t);
                }
              });
  return table;
}

}  // namespace impmech

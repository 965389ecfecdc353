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

#include "impmech/commitment.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "impmech/status.h"

namespace impmech {

namespace {

absl::Status CheckMasses(const std::vector<double>& probabilities) {
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) {
      return absl::InvalidArgumentError("commitment mass must be >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrCat("commitment masses sum to ", total));
  }
  return absl::OkStatus();
}

double MinMass(const std::vector<double>& probabilities,
               const std::vector<int>& set) {
  double low = std::numeric_limits<double>::infinity();
  for (int s : set) low = std::min(low, probabilities[s]);
  return low;
}

}  // namespace

absl::StatusOr<CommitmentDistribution> CommitmentDistribution::FromDeclared(
    std::vector<double> probabilities, std::vector<int> separating_set) {
  if (absl::Status s = CheckMasses(probabilities); !s.ok()) return s;
  std::sort(separating_set.begin(), separating_set.end());
  for (int s : separating_set) {
    if (s < 0 || s >= static_cast<int>(probabilities.size())) {
      return absl::InvalidArgumentError("separating alternative out of range");
    }
  }
  CommitmentDistribution out;
  out.p_tilde =
      separating_set.empty() ? 1.0 : MinMass(probabilities, separating_set);
  if (!(out.p_tilde > 0.0)) {
    return absl::InvalidArgumentError(
        "separating set must carry positive mass");
  }
  out.probabilities = std::move(probabilities);
  out.separating_set = std::move(separating_set);
  return out;
}

absl::StatusOr<CommitmentDistribution> MakeCommitmentDistribution(
    const Environment& env, std::vector<double> probabilities,
    const EnumerationBudget& budget) {
  if (static_cast<int>(probabilities.size()) != env.num_alternatives()) {
    return absl::InvalidArgumentError("one mass per alternative expected");
  }
  if (absl::Status s = CheckMasses(probabilities); !s.ok()) return s;
  std::vector<int> support;
  for (int s = 0; s < env.num_alternatives(); ++s) {
    if (probabilities[s] > 0.0) support.push_back(s);
  }
  absl::StatusOr<SeparationCertificate> certificate =
      FindSeparatingSet(env, budget, support);
  if (!certificate.ok()) return certificate.status();
  return CommitmentDistribution::FromDeclared(
      std::move(probabilities), std::move(certificate->separating_set));
}

absl::StatusOr<CommitmentDistribution> UniformCommitment(
    const Environment& env, const EnumerationBudget& budget) {
  return MakeCommitmentDistribution(
      env, std::vector<double>(env.num_alternatives(),
                               1.0 / env.num_alternatives()),
      budget);
}

Mechanism CommitmentMechanism(const CommitmentDistribution& commitment,
                              const Environment& env) {
  return [probabilities = commitment.probabilities,
          env](std::span<const int> announced) {
    OutcomeDistribution dist(env.num_alternatives());
    for (int s = 0; s < env.num_alternatives(); ++s) {
      if (probabilities[s] <= 0.0) continue;
      std::vector<int> forced(env.num_agents());
      for (int i = 0; i < env.num_agents(); ++i) {
        forced[i] = OptimalReaction(env, i, announced, s);
      }
      dist.Add({s, probabilities[s], std::log(probabilities[s]),
                std::move(forced)});
    }
    return dist;
  };
}

double TruthAdvantage(const Environment& env,
                      const CommitmentDistribution& commitment, int agent,
                      std::span<const int> types, int misreport) {
  double advantage = 0.0;
  for (int s = 0; s < env.num_alternatives(); ++s) {
    const double p = commitment.probabilities[s];
    if (p > 0.0) {
      advantage += p * CommitmentLoss(env, agent, types, misreport, s);
    }
  }
  return advantage;
}

absl::StatusOr<AdvantageReport> CheckTruthAdvantage(
    const Environment& env, const CommitmentDistribution& commitment,
    const VerifyOptions& options) {
  absl::StatusOr<Gap> gap =
      ComputeGap(env, options.budget, commitment.separating_set);
  if (!gap.ok()) return gap.status();
  const ProfileSpace space = env.profile_space();
  const int n = env.num_agents();
  auto chunks = ParallelChunks<AdvantageReport>(
      space.size(), options.jobs, [&](std::uint64_t begin, std::uint64_t end) {
        AdvantageReport local;
        local.min_advantage = std::numeric_limits<double>::infinity();
        TypeProfile t(n);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          space.Decode(idx, t);
          for (int i = 0; i < n; ++i) {
            for (int b = 0; b < env.num_types(i); ++b) {
              if (b == t[i]) continue;
              const double adv = TruthAdvantage(env, commitment, i, t, b);
              if (adv < local.min_advantage) {
                local.min_advantage = adv;
                local.witness = {i, t, b, -1};
              }
            }
          }
        }
        return local;
      });
  AdvantageReport report;
  report.min_advantage = std::numeric_limits<double>::infinity();
  for (const AdvantageReport& c : chunks) {
    if (c.min_advantage < report.min_advantage) {
      report.min_advantage = c.min_advantage;
      report.witness = c.witness;
    }
  }
  report.gamma = gap->gamma;
  report.p_tilde = commitment.p_tilde;
  report.pass = std::isinf(report.min_advantage) ||
                report.min_advantage >= report.p_tilde * report.gamma - 1e-12;
  return report;
}

absl::StatusOr<CommitmentDominanceReport> VerifyCommitmentDominance(
    const Environment& env, const CommitmentDistribution& commitment,
    const VerifyOptions& options) {
  absl::StatusOr<Gap> gap =
      ComputeGap(env, options.budget, commitment.separating_set);
  if (!gap.ok()) return gap.status();
  if (!(gap->gamma > 0.0)) {
    return MakeError(ErrorKind::kNotNonTrivial,
                     "commitment mechanism needs a positive gap");
  }
  const Mechanism mechanism = CommitmentMechanism(commitment, env);
  CommitmentDominanceReport report;
  absl::StatusOr<VerificationReport> nash =
      CheckExPostNashTruthful(mechanism, env, options);
  if (!nash.ok()) return nash.status();
  report.expost_nash = *std::move(nash);
  report.pass = report.expost_nash.pass;
  if (env.values_kind() != ValuesKind::kInterdependent) {
    absl::StatusOr<VerificationReport> strict =
        CheckStrictlyDominantTruthful(mechanism, env, options);
    if (!strict.ok()) return strict.status();
    report.pass = report.pass && strict->pass;
    report.strictly_dominant = *std::move(strict);
  }
  return report;
}

Mechanism RandomDictatorMechanism(const Environment& env) {
  return [env](std::span<const int> announced) {
    const int n = env.num_agents();
    OutcomeDistribution dist(env.num_alternatives());
    for (int i = 0; i < n; ++i) {
      int favourite = 0;
      double best = BestUtility(env, i, announced, 0);
      for (int s = 1; s < env.num_alternatives(); ++s) {
        const double u = BestUtility(env, i, announced, s);
        if (u > best + kArgmaxTolerance) {
          best = u;
          favourite = s;
        }
      }
      dist.Add({favourite, 1.0 / n, -std::log(static_cast<double>(n)), {}});
    }
    return dist;
  };
}

}  // namespace impmech

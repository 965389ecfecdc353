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

#ifndef IMPMECH_COMMITMENT_H_
#define IMPMECH_COMMITMENT_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "impmech/environment.h"
#include "impmech/game.h"
#include "impmech/outcome.h"

namespace impmech {

// Announcement-independent distribution P over S together with the
// separating set it covers.
struct CommitmentDistribution {
  std::vector<double> probabilities;  // one entry per alternative
  std::vector<int> separating_set;    // ascending, all with positive mass
  double p_tilde = 0.0;               // min of P over separating_set

  // Trusts the caller's separating set; checks masses and p_tilde > 0.
  static absl::StatusOr<CommitmentDistribution> FromDeclared(
      std::vector<double> probabilities, std::vector<int> separating_set);
};

// Builds the separating set from P's support by greedy cover.
// kNotNonTrivial if the support does not separate every type pair.
absl::StatusOr<CommitmentDistribution> MakeCommitmentDistribution(
    const Environment& env, std::vector<double> probabilities,
    const EnumerationBudget& budget = {});

// Uniform P over all of S.
absl::StatusOr<CommitmentDistribution> UniformCommitment(
    const Environment& env, const EnumerationBudget& budget = {});

// M^P: draws s from P regardless of the announcement and forces every agent
// to the optimal reaction for the announced profile at s.
Mechanism CommitmentMechanism(const CommitmentDistribution& commitment,
                              const Environment& env);

// E_P[u_i(t, s, r_i(t, s))] - E_P[u_i(t, s, r_i((b_i, t_{-i}), s))].
double TruthAdvantage(const Environment& env,
                      const CommitmentDistribution& commitment, int agent,
                      std::span<const int> types, int misreport);

struct AdvantageReport {
  double min_advantage = 0.0;
  double gamma = 0.0;  // gap over the separating set
  double p_tilde = 0.0;
  bool pass = false;   // min_advantage >= p_tilde * gamma - 1e-12
  GapWitness witness;  // where the minimum is attained
};

// Exhaustive check of truth_advantage >= p~ gamma over every (i, t, b_i).
absl::StatusOr<AdvantageReport> CheckTruthAdvantage(
    const Environment& env, const CommitmentDistribution& commitment,
    const VerifyOptions& options = {});

struct CommitmentDominanceReport {
  VerificationReport expost_nash;
  // Only run under private reactions or private values.
  std::optional<VerificationReport> strictly_dominant;
  bool pass = false;
};

// Ex-post Nash truthfulness of M^P, plus strict dominance when the values
// kind allows it. kNotNonTrivial for trivial environments.
absl::StatusOr<CommitmentDominanceReport> VerifyCommitmentDominance(
    const Environment& env, const CommitmentDistribution& commitment,
    const VerifyOptions& options = {});

// Uniformly random agent picks its favourite alternative for its announced
// type (ties to the lowest index). Non-imposing.
Mechanism RandomDictatorMechanism(const Environment& env);

}  // namespace impmech

#endif  // IMPMECH_COMMITMENT_H_

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

#ifndef IMPMECH_GAME_H_
#define IMPMECH_GAME_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "impmech/environment.h"
#include "impmech/outcome.h"
#include "impmech/random.h"

namespace impmech {

// Per-agent announcement maps W_i : T_i -> T_i.
using StrategyProfile = std::vector<std::vector<int>>;

StrategyProfile TruthfulStrategies(const Environment& env);
TypeProfile Announce(const StrategyProfile& strategies,
                     std::span<const int> types);

enum class Property {
  kExPostNash,
  kDominant,
  kStrictlyDominant,
  kDominated,
  kDp,
  kBetaImplementation,
};

absl::string_view PropertyName(Property property);

// A unilateral deviation: `agent` with true profile `types`, opponents
// announcing `announced` (coordinate `agent` holds the baseline report),
// switching to `deviation`.
struct Witness {
  int agent = -1;
  TypeProfile types;
  TypeProfile announced;
  int deviation = -1;
  double baseline_utility = 0.0;
  double deviation_utility = 0.0;
};

struct VerificationReport {
  Property property = Property::kExPostNash;
  bool pass = false;
  // Worst baseline_utility - deviation_utility over everything checked.
  double margin = 0.0;
  Witness witness;  // attains the margin
  std::uint64_t checked = 0;
  std::string note;
};

// E u_i at true profile t when agents play W.
double ExpectedUtility(const Mechanism& mechanism, const Environment& env,
                       const StrategyProfile& strategies, int agent,
                       std::span<const int> types);

// W is an ex-post Nash equilibrium: for all t, i, b_i,
// E u_i(W(t)) >= E u_i(b_i, W_{-i}(t_{-i})) - 1e-12.
absl::StatusOr<VerificationReport> CheckExPostNash(
    const Mechanism& mechanism, const Environment& env,
    const StrategyProfile& strategies, const VerifyOptions& options = {});

absl::StatusOr<VerificationReport> CheckExPostNashTruthful(
    const Mechanism& mechanism, const Environment& env,
    const VerifyOptions& options = {});

// Truth against every opponent announcement vector: weak (>= -1e-12) or
// strict (> 1e-12). kWrongValuesKind for interdependent environments.
absl::StatusOr<VerificationReport> CheckDominantTruthful(
    const Mechanism& mechanism, const Environment& env, bool strict,
    const VerifyOptions& options = {});

absl::StatusOr<VerificationReport> CheckStrictlyDominantTruthful(
    const Mechanism& mechanism, const Environment& env,
    const VerifyOptions& options = {});

// First map (lexicographic in (W^(0), W^(1), ...)) that does at least as well
// as `base` against every true profile and opponent announcement and strictly
// better somewhere. nullopt when none exists.
absl::StatusOr<std::optional<std::vector<int>>> FindDominatingStrategy(
    const Mechanism& mechanism, const Environment& env, int agent,
    std::span<const int> base, const VerifyOptions& options = {});

struct ImplementationGapReport {
  double beta_measured = 0.0;
  TypeProfile worst_types;
  std::uint64_t profiles = 0;
  bool exhaustive = false;
};

// max over t of [max_s F(t, s) - E_{M(W(t))} F(t, .)]. Exhaustive when
// `probes` is empty, else over the probes only (a lower estimate of the
// true worst case).
absl::StatusOr<ImplementationGapReport> ImplementationGap(
    const Mechanism& mechanism, const Environment& env,
    const Objective& objective, const StrategyProfile& strategies,
    std::span<const TypeProfile> probes = {},
    const VerifyOptions& options = {});

// `count` uniformly random type profiles.
std::vector<TypeProfile> DeterministicProbes(const Environment& env, int count,
                                             RandomStream& stream);

// Recomputes both utilities of a report's witness. True iff they match the
// recorded values (within 1e-12).
bool ReplayWitness(const Mechanism& mechanism, const Environment& env,
                   const Witness& witness);

}  // namespace impmech

#endif  // IMPMECH_GAME_H_

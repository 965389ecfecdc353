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

#ifndef IMPMECH_ENVIRONMENT_H_
#define IMPMECH_ENVIRONMENT_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "impmech/enumeration.h"

namespace impmech {

// A type profile holds one type index per agent.
using TypeProfile = std::vector<int>;

// Absolute tolerance for real equality in argmax comparisons.
inline constexpr double kArgmaxTolerance = 1e-12;

enum class ValuesKind {
  kInterdependent,
  kPrivateReactions,
  kPrivateValues,
};

absl::string_view ValuesKindName(ValuesKind kind);

// Utility of agent `agent` at true type profile `types`, alternative
// `alternative` and reaction `reaction`. Must lie in [0, 1].
using UtilityFunction = std::function<double(
    int agent, std::span<const int> types, int alternative, int reaction)>;

// Affine map from application-level utilities into [0, 1]:
// normalized = (raw - offset) * scale.
struct UtilityNormalization {
  double offset = 0.0;
  double scale = 1.0;

  double FromRaw(double raw) const { return (raw - offset) * scale; }
  double ToRaw(double normalized) const { return normalized / scale + offset; }

  // Smallest map sending [lo, hi] into [0, 1]; a pure shift when hi - lo <= 1.
  static UtilityNormalization Covering(double lo, double hi);
};

struct EnvironmentSpec {
  std::vector<int> type_counts;
  int num_alternatives = 0;
  std::vector<int> reaction_counts;
  UtilityFunction utility;
  ValuesKind values_kind = ValuesKind::kInterdependent;
  UtilityNormalization normalization;
  // Optional display labels; empty means "use indices".
  std::vector<std::string> alternative_labels;
};

// Finite environment (T, S, R, u). A cheap-to-copy handle to immutable data;
// safe to share across threads.
class Environment {
 public:
  // Validates shape only. The declared values kind is verified separately by
  // VerifyValuesKind so that construction stays O(n).
  static absl::StatusOr<Environment> Create(EnvironmentSpec spec);

  int num_agents() const { return static_cast<int>(data_->type_counts.size()); }
  int num_types(int agent) const { return data_->type_counts[agent]; }
  std::span<const int> type_counts() const { return data_->type_counts; }
  int num_alternatives() const { return data_->num_alternatives; }
  int num_reactions(int agent) const { return data_->reaction_counts[agent]; }
  ValuesKind values_kind() const { return data_->values_kind; }
  const UtilityNormalization& normalization() const {
    return data_->normalization;
  }
  std::string AlternativeLabel(int alternative) const;

  double Utility(int agent, std::span<const int> types, int alternative,
                 int reaction) const {
    return data_->utility(agent, types, alternative, reaction);
  }

  ProfileSpace profile_space() const { return ProfileSpace(data_->type_counts); }

 private:
  explicit Environment(std::shared_ptr<const EnvironmentSpec> data)
      : data_(std::move(data)) {}

  std::shared_ptr<const EnvironmentSpec> data_;
};

// Objective F : T x S -> [0, 1] with a declared sensitivity bound d: a
// unilateral type change moves F by at most d / n at any fixed alternative.
struct Objective {
  std::function<double(std::span<const int> types, int alternative)> eval;
  double sensitivity = 1.0;

  double operator()(std::span<const int> types, int alternative) const {
    return eval(types, alternative);
  }
};

// Average of u_i(t, s, r_i(t, s)); 1-sensitive.
Objective AverageUtilityObjective(const Environment& env);

// Optimal reaction of `agent` among `allowed` (non-empty). Ties go to the
// lowest reaction index.
int OptimalReaction(const Environment& env, int agent,
                    std::span<const int> types, int alternative,
                    std::span<const int> allowed);
// Same, over the full reaction set.
int OptimalReaction(const Environment& env, int agent,
                    std::span<const int> types, int alternative);

// All reactions within kArgmaxTolerance of the best, ascending.
std::vector<int> OptimalReactionSet(const Environment& env, int agent,
                                    std::span<const int> types,
                                    int alternative);

// Best attainable utility u_i(t, s, r_i(t, s)).
double BestUtility(const Environment& env, int agent,
                   std::span<const int> types, int alternative);

// Re-checks by enumeration that the declared values kind holds (every
// utility in [0, 1]; argmax or utility independent of t_{-i} as declared).
absl::Status VerifyValuesKind(const Environment& env,
                              const EnumerationBudget& budget = {});

struct SensitivityWitness {
  int agent = -1;
  TypeProfile types;
  int alternate_type = -1;
  int alternative = -1;
};

struct SensitivityReport {
  double tightest_d = 0.0;
  double declared_d = 0.0;
  bool pass = false;
  SensitivityWitness witness;
};

// Tightest d = n * max |F(t_i, t_{-i}, s) - F(t^_i, t_{-i}, s)| over all
// unilateral swaps; pass iff tightest_d <= declared + 1e-12.
absl::StatusOr<SensitivityReport> VerifySensitivity(
    const Objective& objective, const Environment& env,
    const EnumerationBudget& budget = {});

// Truthful-vs-committed loss witness for the gap.
struct GapWitness {
  int agent = -1;
  TypeProfile types;   // true profile t
  int misreport = -1;  // b_i
  int best_alternative = -1;
};

struct Gap {
  // +infinity when no agent has two types (nothing to separate).
  double gamma = 0.0;
  GapWitness argmin_witness;
};

// gamma = min over (i, t_i != b_i, t_{-i}) of max over s of
//   u_i(t, s, r_i(t, s)) - u_i(t, s, r_i((b_i, t_{-i}), s)).
// `alternatives` restricts the inner max; empty means all of S.
absl::StatusOr<Gap> ComputeGap(const Environment& env,
                               const EnumerationBudget& budget = {},
                               std::span<const int> alternatives = {});

// Loss from being committed to the optimal reaction for (b_i, t_{-i}) at a
// single alternative.
double CommitmentLoss(const Environment& env, int agent,
                      std::span<const int> types, int misreport,
                      int alternative);

struct SeparationWitness {
  int agent = -1;
  int type_a = -1;
  int type_b = -1;  // type_a < type_b
  TypeProfile opponents;  // full profile; coordinate `agent` is ignored
  int alternative = -1;
};

struct SeparationCertificate {
  std::vector<int> separating_set;  // ascending
  std::vector<SeparationWitness> witnesses;
};

// True iff the optimal-reaction sets of the two types are disjoint at s.
bool Separates(const Environment& env, int agent, std::span<const int> types,
               int type_a, int type_b, int alternative);

// Greedy cover over (i, type pair, opponent profile) triples, drawing from
// `candidates` (empty = all of S) in ascending order. kNotNonTrivial when some
// triple has no separating candidate.
absl::StatusOr<SeparationCertificate> FindSeparatingSet(
    const Environment& env, const EnumerationBudget& budget = {},
    std::span<const int> candidates = {});

// Re-evaluates every witness; true iff all confirm disjointness and every
// witnessed alternative lies in the separating set.
bool ValidateCertificate(const Environment& env,
                         const SeparationCertificate& certificate);

}  // namespace impmech

#endif  // IMPMECH_ENVIRONMENT_H_

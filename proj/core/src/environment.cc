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

#include "impmech/environment.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "impmech/status.h"

namespace impmech {

absl::string_view ValuesKindName(ValuesKind kind) {
  switch (kind) {
    case ValuesKind::kInterdependent:
      return "interdependent";
    case ValuesKind::kPrivateReactions:
      return "private-reactions";
    case ValuesKind::kPrivateValues:
      return "private-values";
  }
  return "unknown";
}

UtilityNormalization UtilityNormalization::Covering(double lo, double hi) {
  UtilityNormalization map;
  map.offset = lo;
  map.scale = (hi - lo > 1.0) ? 1.0 / (hi - lo) : 1.0;
  return map;
}

absl::StatusOr<Environment> Environment::Create(EnvironmentSpec spec) {
  if (spec.type_counts.empty()) {
    return absl::InvalidArgumentError("environment needs at least one agent");
  }
  if (spec.reaction_counts.size() != spec.type_counts.size()) {
    return absl::InvalidArgumentError(
        "reaction_counts must have one entry per agent");
  }
  for (std::size_t i = 0; i < spec.type_counts.size(); ++i) {
    if (spec.type_counts[i] <= 0 || spec.reaction_counts[i] <= 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "agent ", i, " has an empty type or reaction space"));
    }
  }
  if (spec.num_alternatives <= 0) {
    return absl::InvalidArgumentError("alternative set is empty");
  }
  if (!spec.utility) {
    return absl::InvalidArgumentError("utility function is missing");
  }
  if (!spec.alternative_labels.empty() &&
      static_cast<int>(spec.alternative_labels.size()) !=
          spec.num_alternatives) {
    return absl::InvalidArgumentError("one label per alternative expected");
  }
  return Environment(std::make_shared<const EnvironmentSpec>(std::move(spec)));
}

std::string Environment::AlternativeLabel(int alternative) const {
  if (data_->alternative_labels.empty()) return absl::StrCat(alternative);
  return data_->alternative_labels[alternative];
}

Objective AverageUtilityObjective(const Environment& env) {
  Objective objective;
  objective.sensitivity = 1.0;
  objective.eval = [env](std::span<const int> types, int alternative) {
    double total = 0.0;
    for (int i = 0; i < env.num_agents(); ++i) {
      total += BestUtility(env, i, types, alternative);
    }
    return total / env.num_agents();
  };
  return objective;
}

int OptimalReaction(const Environment& env, int agent,
                    std::span<const int> types, int alternative,
                    std::span<const int> allowed) {
  int best = allowed.front();
  double best_value = env.Utility(agent, types, alternative, best);
  for (std::size_t k = 1; k < allowed.size(); ++k) {
    const double value = env.Utility(agent, types, alternative, allowed[k]);
    if (value > best_value + kArgmaxTolerance ||
        (std::abs(value - best_value) <= kArgmaxTolerance &&
         allowed[k] < best)) {
      best = allowed[k];
      best_value = value;
    }
  }
  return best;
}

int OptimalReaction(const Environment& env, int agent,
                    std::span<const int> types, int alternative) {
  int best = 0;
  double best_value = env.Utility(agent, types, alternative, 0);
  for (int r = 1; r < env.num_reactions(agent); ++r) {
    const double value = env.Utility(agent, types, alternative, r);
    if (value > best_value + kArgmaxTolerance) {
      best = r;
      best_value = value;
    }
  }
  return best;
}

std::vector<int> OptimalReactionSet(const Environment& env, int agent,
                                    std::span<const int> types,
                                    int alternative) {
  const int count = env.num_reactions(agent);
  std::vector<double> values(count);
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < count; ++r) {
    values[r] = env.Utility(agent, types, alternative, r);
    best = std::max(best, values[r]);
  }
  std::vector<int> argmax;
  for (int r = 0; r < count; ++r) {
    if (values[r] >= best - kArgmaxTolerance) argmax.push_back(r);
  }
  return argmax;
}

double BestUtility(const Environment& env, int agent,
                   std::span<const int> types, int alternative) {
  double best = env.Utility(agent, types, alternative, 0);
  for (int r = 1; r < env.num_reactions(agent); ++r) {
    best = std::max(best, env.Utility(agent, types, alternative, r));
  }
  return best;
}

namespace {

std::uint64_t MaxTypes(const Environment& env) {
  int most = 1;
  for (int c : env.type_counts()) most = std::max(most, c);
  return static_cast<std::uint64_t>(most);
}

std::uint64_t MaxReactions(const Environment& env) {
  int most = 1;
  for (int i = 0; i < env.num_agents(); ++i) {
    most = std::max(most, env.num_reactions(i));
  }
  return static_cast<std::uint64_t>(most);
}

absl::Status CheckSpaceBudget(const Environment& env, std::uint64_t per_profile,
                              const EnumerationBudget& budget,
                              absl::string_view what) {
  const ProfileSpace space = env.profile_space();
  if (!space.indexable()) {
    return MakeError(ErrorKind::kEnumerationBudgetExceeded,
                     absl::StrCat(what, ": type space is not enumerable"));
  }
  return CheckBudget(SaturatingMul(space.size(), per_profile), budget, what);
}

}  // namespace

absl::Status VerifyValuesKind(const Environment& env,
                              const EnumerationBudget& budget) {
  const int n = env.num_agents();
  const int s_count = env.num_alternatives();
  const std::uint64_t per_profile = SaturatingMul(
      SaturatingMul(static_cast<std::uint64_t>(n), s_count), MaxReactions(env));
  if (absl::Status s = CheckSpaceBudget(env, per_profile, budget,
                                        "values-kind verification");
      !s.ok()) {
    return s;
  }
  const ProfileSpace space = env.profile_space();
  TypeProfile t(n), anchor(n);
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    space.Decode(idx, t);
    for (int i = 0; i < n; ++i) {
      std::fill(anchor.begin(), anchor.end(), 0);
      anchor[i] = t[i];
      for (int s = 0; s < s_count; ++s) {
        for (int r = 0; r < env.num_reactions(i); ++r) {
          const double u = env.Utility(i, t, s, r);
          if (!(u >= -kArgmaxTolerance && u <= 1.0 + kArgmaxTolerance)) {
            return absl::InvalidArgumentError(absl::StrCat(
                "utility ", u, " outside [0,1] for agent ", i,
                " alternative ", s, " reaction ", r));
          }
          if (env.values_kind() == ValuesKind::kPrivateValues &&
              std::abs(u - env.Utility(i, anchor, s, r)) > kArgmaxTolerance) {
            return MakeError(ErrorKind::kWrongValuesKind,
                             absl::StrCat("agent ", i,
                                          " utility depends on opponents' "
                                          "types at alternative ",
                                          s));
          }
        }
        if (env.values_kind() != ValuesKind::kInterdependent &&
            OptimalReactionSet(env, i, t, s) !=
                OptimalReactionSet(env, i, anchor, s)) {
          return MakeError(ErrorKind::kWrongValuesKind,
                           absl::StrCat("agent ", i,
                                        " optimal reactions depend on "
                                        "opponents' types at alternative ",
                                        s));
        }
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SensitivityReport> VerifySensitivity(
    const Objective& objective, const Environment& env,
    const EnumerationBudget& budget) {
  const int n = env.num_agents();
  const int s_count = env.num_alternatives();
  const std::uint64_t per_profile = SaturatingMul(
      s_count, 1 + SaturatingMul(static_cast<std::uint64_t>(n), MaxTypes(env)));
  if (absl::Status s =
          CheckSpaceBudget(env, per_profile, budget, "sensitivity check");
      !s.ok()) {
    return s;
  }
  const ProfileSpace space = env.profile_space();
  std::vector<double> values(space.size() * s_count);
  TypeProfile t(n);
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    space.Decode(idx, t);
    for (int s = 0; s < s_count; ++s) {
      values[idx * s_count + s] = objective(t, s);
    }
  }
  SensitivityReport report;
  report.declared_d = objective.sensitivity;
  double worst = 0.0;
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    space.Decode(idx, t);
    for (int i = 0; i < n; ++i) {
      for (int other = t[i] + 1; other < env.num_types(i); ++other) {
        const std::uint64_t swapped = space.Replace(idx, i, other);
        for (int s = 0; s < s_count; ++s) {
          const double delta = std::abs(values[idx * s_count + s] -
                                        values[swapped * s_count + s]);
          if (delta > worst) {
            worst = delta;
            report.witness = {i, t, other, s};
          }
        }
      }
    }
  }
  report.tightest_d = n * worst;
  report.pass = report.tightest_d <= report.declared_d + 1e-12;
  return report;
}

double CommitmentLoss(const Environment& env, int agent,
                      std::span<const int> types, int misreport,
                      int alternative) {
  TypeProfile announced(types.begin(), types.end());
  announced[agent] = misreport;
  const int committed = OptimalReaction(env, agent, announced, alternative);
  return BestUtility(env, agent, types, alternative) -
         env.Utility(agent, types, alternative, committed);
}

absl::StatusOr<Gap> ComputeGap(const Environment& env,
                               const EnumerationBudget& budget,
                               std::span<const int> alternatives) {
  std::vector<int> pool(alternatives.begin(), alternatives.end());
  if (pool.empty()) {
    for (int s = 0; s < env.num_alternatives(); ++s) pool.push_back(s);
  }
  const int n = env.num_agents();
  const std::uint64_t per_profile = SaturatingMul(
      SaturatingMul(static_cast<std::uint64_t>(n), MaxTypes(env)),
      SaturatingMul(pool.size(), MaxReactions(env)));
  if (absl::Status s = CheckSpaceBudget(env, per_profile, budget, "gap");
      !s.ok()) {
    return s;
  }
  Gap gap;
  gap.gamma = std::numeric_limits<double>::infinity();
  const ProfileSpace space = env.profile_space();
  TypeProfile t(n);
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    space.Decode(idx, t);
    for (int i = 0; i < n; ++i) {
      for (int b = 0; b < env.num_types(i); ++b) {
        if (b == t[i]) continue;
        double best = -std::numeric_limits<double>::infinity();
        int best_s = -1;
        for (int s : pool) {
          const double loss = CommitmentLoss(env, i, t, b, s);
          if (loss > best) {
            best = loss;
            best_s = s;
          }
        }
        if (best < gap.gamma) {
          gap.gamma = best;
          gap.argmin_witness = {i, t, b, best_s};
        }
      }
    }
  }
  return gap;
}

bool Separates(const Environment& env, int agent, std::span<const int> types,
               int type_a, int type_b, int alternative) {
  TypeProfile profile(types.begin(), types.end());
  profile[agent] = type_a;
  const std::vector<int> first =
      OptimalReactionSet(env, agent, profile, alternative);
  profile[agent] = type_b;
  const std::vector<int> second =
      OptimalReactionSet(env, agent, profile, alternative);
  std::vector<int> common;
  std::set_intersection(first.begin(), first.end(), second.begin(),
                        second.end(), std::back_inserter(common));
  return common.empty();
}

absl::StatusOr<SeparationCertificate> FindSeparatingSet(
    const Environment& env, const EnumerationBudget& budget,
    std::span<const int> candidates) {
  std::vector<int> pool(candidates.begin(), candidates.end());
  if (pool.empty()) {
    for (int s = 0; s < env.num_alternatives(); ++s) pool.push_back(s);
  }
  std::sort(pool.begin(), pool.end());
  const int n = env.num_agents();
  const std::uint64_t per_profile = SaturatingMul(
      SaturatingMul(static_cast<std::uint64_t>(n), MaxTypes(env)),
      SaturatingMul(pool.size(), 2 * MaxReactions(env)));
  if (absl::Status s =
          CheckSpaceBudget(env, per_profile, budget, "separating set");
      !s.ok()) {
    return s;
  }
  SeparationCertificate certificate;
  std::vector<char> chosen(env.num_alternatives(), 0);
  const ProfileSpace space = env.profile_space();
  TypeProfile t(n);
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    space.Decode(idx, t);
    for (int i = 0; i < n; ++i) {
      for (int b = t[i] + 1; b < env.num_types(i); ++b) {
        int witness = -1;
        for (int s : certificate.separating_set) {
          if (Separates(env, i, t, t[i], b, s)) {
            witness = s;
            break;
          }
        }
        if (witness < 0) {
          for (int s : pool) {
            if (!chosen[s] && Separates(env, i, t, t[i], b, s)) {
              witness = s;
              chosen[s] = 1;
              certificate.separating_set.push_back(s);
              break;
            }
          }
        }
        if (witness < 0) {
          return MakeError(
              ErrorKind::kNotNonTrivial,
              absl::StrCat("no alternative separates types ", t[i], " and ",
                           b, " of agent ", i, " at profile index ", idx));
        }
        certificate.witnesses.push_back({i, t[i], b, t, witness});
      }
    }
  }
  std::sort(certificate.separating_set.begin(),
            certificate.separating_set.end());
  return certificate;
}

bool ValidateCertificate(const Environment& env,
                         const SeparationCertificate& certificate) {
  std::uint64_t expected = 0;
  const ProfileSpace space = env.profile_space();
  for (int i = 0; i < env.num_agents(); ++i) {
    const std::uint64_t k = env.num_types(i);
    expected += space.size() / k * (k * (k - 1) / 2);
  }
  if (certificate.witnesses.size() != expected) return false;
  for (const SeparationWitness& w : certificate.witnesses) {
    if (!std::binary_search(certificate.separating_set.begin(),
                            certificate.separating_set.end(), w.alternative)) {
      return false;
    }
    if (!Separates(env, w.agent, w.opponents, w.type_a, w.type_b,
                   w.alternative)) {
      return false;
    }
  }
  return true;
}

}  // namespace impmech

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

#include "impmech/facility.h"

#include <cmath>
#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "impmech/status.h"

namespace impmech {

std::vector<int> GridFacilityInstance::Facilities(int s) const {
  return alternatives.Decode(static_cast<std::uint64_t>(s));
}

absl::StatusOr<GridFacilityInstance> BuildGridFacilityEnv(int n, int m,
                                                          int k) {
  if (n < 1 || m < 1 || k < 1) {
    return absl::InvalidArgumentError("n, m and K must be positive");
  }
  ProfileSpace alternatives(std::vector<int>(k, m + 1));
  if (alternatives.size() > (std::uint64_t{1} << 24)) {
    return MakeError(ErrorKind::kEnumerationBudgetExceeded,
                     "grid alternative set too large");
  }
  const int count = static_cast<int>(alternatives.size());
  // hosts[s][r] = 1 iff location r carries a facility under alternative s.
  auto hosts = std::make_shared<std::vector<std::vector<char>>>(
      count, std::vector<char>(m + 1, 0));
  std::vector<std::string> labels;
  for (int s = 0; s < count; ++s) {
    const std::vector<int> sites = alternatives.Decode(s);
    for (int r : sites) (*hosts)[s][r] = 1;
    labels.push_back(absl::StrCat("(", absl::StrJoin(sites, ","), ")/", m));
  }
  const double step = 1.0 / m;

  EnvironmentSpec spec;
  spec.type_counts.assign(n, m + 1);
  spec.reaction_counts.assign(n, m + 1);
  spec.num_alternatives = count;
  spec.values_kind = ValuesKind::kPrivateValues;
  spec.normalization = {-1.0, 1.0};
  spec.alternative_labels = std::move(labels);
  spec.utility = [hosts, step](int agent, std::span<const int> types, int s,
                               int r) {
    if (!(*hosts)[s][r]) return 0.0;
    return 1.0 - std::abs(types[agent] - r) * step;
  };
  absl::StatusOr<Environment> env = Environment::Create(std::move(spec));
  if (!env.ok()) return env.status();

  GridFacilityInstance instance{n, m, k, *env, {}, step, alternatives};
  // Nearest facility per (location, alternative), precomputed once.
  auto nearest = std::make_shared<std::vector<double>>(
      static_cast<std::size_t>(count) * (m + 1));
  for (int s = 0; s < count; ++s) {
    const std::vector<int> sites = alternatives.Decode(s);
    for (int x = 0; x <= m; ++x) {
      int best = m + 1;
      for (int r : sites) best = std::min(best, std::abs(x - r));
      (*nearest)[static_cast<std::size_t>(s) * (m + 1) + x] =
          1.0 - best * step;
    }
  }
  instance.objective.sensitivity = 1.0;
  instance.objective.eval = [nearest, m](std::span<const int> types, int s) {
    double total = 0.0;
    for (int x : types) {
      total += (*nearest)[static_cast<std::size_t>(s) * (m + 1) + x];
    }
    return total / static_cast<double>(types.size());
  };
  return instance;
}

absl::StatusOr<CommitmentDistribution> Loc1Commitment(
    const GridFacilityInstance& instance) {
  const int count = instance.env.num_alternatives();
  std::vector<int> all(count);
  for (int s = 0; s < count; ++s) all[s] = s;
  return CommitmentDistribution::FromDeclared(
      std::vector<double>(count, 1.0 / count), std::move(all));
}

absl::StatusOr<CommitmentDistribution> Loc2Commitment(
    const GridFacilityInstance& instance) {
  if (instance.k < 2) {
    return MakeError(ErrorKind::kNotNonTrivial,
                     "dyad commitment needs at least two facilities");
  }
  std::vector<double> probabilities(instance.env.num_alternatives(), 0.0);
  std::vector<int> dyads;
  for (int j = 0; j < instance.m; ++j) {
    std::vector<int> sites(instance.k, j + 1);
    sites[0] = j;
    const int s = static_cast<int>(instance.alternatives.Encode(sites));
    probabilities[s] = 1.0 / instance.m;
    dyads.push_back(s);
  }
  return CommitmentDistribution::FromDeclared(std::move(probabilities),
                                              std::move(dyads));
}

absl::StatusOr<MechanismParams> Loc1Params(int n, int m, int k) {
  const int count = static_cast<int>(std::pow(m + 1, k));
  return ScheduleParams(1.0, 1.0 / m, 1.0 / count, count, n);
}

absl::StatusOr<MechanismParams> Loc2Params(int n, int m, int k) {
  if (k < 2) {
    return MakeError(ErrorKind::kNotNonTrivial,
                     "dyad commitment needs at least two facilities");
  }
  const int count = static_cast<int>(std::pow(m + 1, k));
  return ScheduleParams(1.0, 1.0 / m, 1.0 / m, count, n);
}

double Loc1Bound(std::int64_t n, int m, int k) {
  const double x = static_cast<double>(n);
  return 6.0 * std::sqrt(m * std::pow(m + 1, k) / x) *
         std::sqrt(std::log(x / (2.0 * m)));
}

double Loc2Bound(std::int64_t n, int m, int k) {
  const double x = static_cast<double>(n);
  return 6.0 * std::sqrt(static_cast<double>(m) * m / x) *
         std::sqrt(std::log(x * std::pow(m + 1, k) / (2.0 * m * m)));
}

absl::StatusOr<Mechanism> Loc1Mechanism(const GridFacilityInstance& instance,
                                        const MechanismParams& params) {
  absl::StatusOr<CommitmentDistribution> p = Loc1Commitment(instance);
  if (!p.ok()) return p.status();
  return CombinedMechanism(instance.objective, instance.env, *p, params);
}

absl::StatusOr<Mechanism> Loc2Mechanism(const GridFacilityInstance& instance,
                                        const MechanismParams& params) {
  absl::StatusOr<CommitmentDistribution> p = Loc2Commitment(instance);
  if (!p.ok()) return p.status();
  return CombinedMechanism(instance.objective, instance.env, *p, params);
}

}  // namespace impmech

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

// Seeded generator of small random environments with a d-sensitive
// objective, shared by the unit and acceptance tests.

#ifndef IMPMECH_TESTS_TESTING_RANDOM_INSTANCES_H_
#define IMPMECH_TESTS_TESTING_RANDOM_INSTANCES_H_

#include <algorithm>
#include <memory>
#include <span>
#include <vector>

#include "impmech/enumeration.h"
#include "impmech/environment.h"
#include "impmech/random.h"

namespace impmech::testing {

struct RandomInstance {
  Environment env;
  Objective objective;
};

struct RandomInstanceLimits {
  int max_agents = 4;
  int max_types = 3;
  int max_alternatives = 5;
  int max_reactions = 2;
};

// Utilities are an arbitrary table in [0, 1] (interdependent). The objective
// is F(t, s) = (d / n) max(sum_i g_i(t_i, s), c_s) with g in [0, 1], which
// moves by at most d / n under any unilateral change.
inline RandomInstance MakeRandomInstance(RandomStream& rng,
                                         const RandomInstanceLimits& limits =
                                             {}) {
  const int n = 1 + static_cast<int>(rng.UniformInt(limits.max_agents));
  const int s_count =
      2 + static_cast<int>(rng.UniformInt(limits.max_alternatives - 1));
  EnvironmentSpec spec;
  for (int i = 0; i < n; ++i) {
    spec.type_counts.push_back(1 +
                               static_cast<int>(rng.UniformInt(limits.max_types)));
    spec.reaction_counts.push_back(
        1 + static_cast<int>(rng.UniformInt(limits.max_reactions)));
  }
  spec.num_alternatives = s_count;

  const ProfileSpace space(spec.type_counts);
  const int max_reactions =
      *std::max_element(spec.reaction_counts.begin(), spec.reaction_counts.end());
  auto table = std::make_shared<std::vector<double>>(
      space.size() * n * s_count * max_reactions);
  for (double& u : *table) u = rng.Uniform();
  spec.utility = [table, space, n, s_count, max_reactions](
                     int i, std::span<const int> t, int s, int r) {
    const std::uint64_t row = space.Encode(t);
    return (*table)[((row * n + i) * s_count + s) * max_reactions + r];
  };
  spec.values_kind = ValuesKind::kInterdependent;

  const double d = rng.Uniform(0.25, 1.0);
  auto g = std::make_shared<std::vector<std::vector<std::vector<double>>>>();
  for (int i = 0; i < n; ++i) {
    g->emplace_back(spec.type_counts[i], std::vector<double>(s_count));
    for (auto& per_type : g->back()) {
      for (double& v : per_type) v = rng.Uniform();
    }
  }
  auto floor = std::make_shared<std::vector<double>>(s_count);
  for (double& c : *floor) c = rng.Uniform(0.0, n);

  Objective objective;
  objective.sensitivity = d;
  objective.eval = [g, floor, d, n](std::span<const int> t, int s) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += (*g)[i][t[i]][s];
    return d / n * std::max(sum, (*floor)[s]);
  };
  return {*Environment::Create(std::move(spec)), std::move(objective)};
}

}  // namespace impmech::testing

#endif  // IMPMECH_TESTS_TESTING_RANDOM_INSTANCES_H_

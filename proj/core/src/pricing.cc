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

#include "impmech/pricing.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "impmech/enumeration.h"
#include "impmech/status.h"

namespace impmech {

namespace {

constexpr double kSlack = 1e-12;

// Shared by the example builders: two types, two prices, Buy = 0.
absl::StatusOr<PricingInstance> TwoPriceInstance(int n, double low_value,
                                                 double high_value,
                                                 double low_price) {
  if (n < 1) return absl::InvalidArgumentError("need at least one buyer");
  auto values = std::make_shared<std::vector<double>>(
      std::vector<double>{low_value, high_value});
  auto prices = std::make_shared<std::vector<double>>(
      std::vector<double>{low_price, 1.0});
  const UtilityNormalization norm = UtilityNormalization::Covering(
      std::min(0.0, low_value - 1.0), high_value - low_price);
  EnvironmentSpec spec;
  spec.type_counts.assign(n, 2);
  spec.reaction_counts.assign(n, 2);
  spec.num_alternatives = 2;
  spec.values_kind = ValuesKind::kPrivateValues;
  spec.normalization = norm;
  spec.alternative_labels = {absl::StrCat(low_price), "1"};
  spec.utility = [values, prices, norm](int agent, std::span<const int> types,
                                        int s, int r) {
    const double raw = r == 0 ? (*values)[types[agent]] - (*prices)[s] : 0.0;
    return norm.FromRaw(raw);
  };
  absl::StatusOr<Environment> env = Environment::Create(std::move(spec));
  if (!env.ok()) return env.status();

  PricingInstance instance{*env, {}, *prices, 0, 0.0, {}};
  instance.objective.sensitivity = 1.0;
  instance.objective.eval = [values, prices](std::span<const int> types,
                                             int s) {
    const double p = (*prices)[s];
    int buyers = 0;
    for (int x : types) buyers += (*values)[x] >= p ? 1 : 0;
    return p * buyers / static_cast<double>(types.size());
  };
  instance.declared_gamma = norm.scale * (1.0 - low_price);
  instance.valuation = [values](int agent, std::span<const int> types) {
    return (*values)[types[agent]];
  };
  return instance;
}

}  // namespace

PricingSpec DefaultPricingSpec(int cohorts, int cohort_size, int grid_m) {
  PricingSpec spec;
  spec.cohorts = cohorts;
  spec.cohort_size = cohort_size;
  spec.grid_m = grid_m;
  spec.signal_counts.assign(cohort_size, 2);
  const ProfileSpace rows(spec.signal_counts);
  for (std::uint64_t r = 0; r < rows.size(); ++r) {
    const std::vector<int> x = rows.Decode(r);
    int total = 0;
    for (int v : x) total += v;
    std::vector<double> row(cohort_size);
    for (int d = 0; d < cohort_size; ++d) {
      const double others =
          cohort_size > 1
              ? static_cast<double>(total - x[d]) / (cohort_size - 1)
              : 0.0;
      row[d] = 0.05 + 0.8 * x[d] + 0.05 * others;
    }
    spec.valuation_table.push_back(std::move(row));
  }
  return spec;
}

absl::StatusOr<PricingInstance> BuildPricingEnv(const PricingSpec& spec) {
  const int big_d = spec.cohort_size;
  if (spec.cohorts < 1 || big_d < 1 || spec.grid_m < 1) {
    return absl::InvalidArgumentError(
        "cohorts, cohort_size and grid_m must be positive");
  }
  if (static_cast<int>(spec.signal_counts.size()) != big_d) {
    return absl::InvalidArgumentError("one signal count per cohort member");
  }
  for (int c : spec.signal_counts) {
    if (c < 1) return absl::InvalidArgumentError("empty signal space");
  }
  const ProfileSpace rows(spec.signal_counts);
  if (spec.valuation_table.size() != rows.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("valuation_table needs ", rows.size(), " rows"));
  }
  double v_min = std::numeric_limits<double>::infinity();
  double v_max = -std::numeric_limits<double>::infinity();
  for (const std::vector<double>& row : spec.valuation_table) {
    if (static_cast<int>(row.size()) != big_d) {
      return absl::InvalidArgumentError("valuation row has wrong width");
    }
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        return absl::InvalidArgumentError("valuations must be finite, >= 0");
      }
      v_min = std::min(v_min, v);
      v_max = std::max(v_max, v);
    }
  }

  const double m = spec.grid_m;
  for (std::uint64_t r = 0; r < rows.size(); ++r) {
    const std::vector<int> x = rows.Decode(r);
    for (int d = 0; d < big_d; ++d) {
      if (x[d] + 1 < spec.signal_counts[d]) {
        const std::vector<double>& lo = spec.valuation_table[r];
        const std::vector<double>& hi =
            spec.valuation_table[rows.Replace(r, d, x[d] + 1)];
        for (int e = 0; e < big_d; ++e) {
          if (hi[e] < lo[e] - kSlack) {
            return absl::InvalidArgumentError(absl::StrCat(
                "raising member ", d, "'s signal lowers member ", e,
                "'s valuation (row ", r, ")"));
          }
        }
        if (!(hi[d] > lo[d] + kSlack)) {
          return absl::InvalidArgumentError(absl::StrCat(
              "member ", d, "'s own signal is not informative at row ", r));
        }
      }
      // Fineness: every own-signal pair is split by a grid price with a 2/m
      // cushion above.
      for (int above = x[d] + 1; above < spec.signal_counts[d]; ++above) {
        const double v_hi = spec.valuation_table[rows.Replace(r, d, above)][d];
        const double v_lo = spec.valuation_table[r][d];
        bool split = false;
        for (int j = 0; j <= spec.grid_m && !split; ++j) {
          const double p = j / m;
          split = v_hi > p + 2.0 / m && p > v_lo;
        }
        if (!split) {
          return MakeError(
              ErrorKind::kGridTooCoarse,
              absl::StrCat("no price on the 1/", spec.grid_m,
                           " grid separates member ", d, "'s valuations ",
                           v_lo, " and ", v_hi));
        }
      }
    }
  }

  auto table = std::make_shared<std::vector<std::vector<double>>>(
      spec.valuation_table);
  auto strides = std::make_shared<std::vector<std::uint64_t>>();
  std::uint64_t stride = 1;
  for (int c : spec.signal_counts) {
    strides->push_back(stride);
    stride *= c;
  }
  auto valuation = [table, strides, big_d](int agent,
                                           std::span<const int> types) {
    const int cohort = agent / big_d;
    std::uint64_t row = 0;
    for (int d = 0; d < big_d; ++d) {
      row += (*strides)[d] * static_cast<std::uint64_t>(types[cohort * big_d + d]);
    }
    return (*table)[row][agent % big_d];
  };

  const int n = spec.cohorts * big_d;
  const UtilityNormalization norm =
      UtilityNormalization::Covering(std::min(0.0, v_min - 1.0), v_max);
  const int grid_m = spec.grid_m;
  constexpr int kBuy = 1;

  EnvironmentSpec env_spec;
  env_spec.type_counts.resize(n);
  for (int k = 0; k < n; ++k) {
    env_spec.type_counts[k] = spec.signal_counts[k % big_d];
  }
  env_spec.reaction_counts.assign(n, 2);
  env_spec.num_alternatives = grid_m + 1;
  env_spec.values_kind =
      big_d > 1 ? ValuesKind::kInterdependent : ValuesKind::kPrivateValues;
  env_spec.normalization = norm;
  for (int j = 0; j <= grid_m; ++j) {
    env_spec.alternative_labels.push_back(absl::StrCat(j, "/", grid_m));
  }
  env_spec.utility = [valuation, norm, grid_m](int agent,
                                               std::span<const int> types,
                                               int s, int r) {
    const double raw =
        r == kBuy ? valuation(agent, types) - static_cast<double>(s) / grid_m
                  : 0.0;
    return norm.FromRaw(raw);
  };
  absl::StatusOr<Environment> env = Environment::Create(std::move(env_spec));
  if (!env.ok()) return env.status();

  PricingInstance instance{*env, {}, {}, kBuy, norm.scale / m, valuation};
  for (int j = 0; j <= grid_m; ++j) instance.prices.push_back(j / m);
  instance.objective.sensitivity = big_d;
  instance.objective.eval = [valuation, grid_m](std::span<const int> types,
                                                int s) {
    const double p = static_cast<double>(s) / grid_m;
    const int count = static_cast<int>(types.size());
    int buyers = 0;
    for (int k = 0; k < count; ++k) buyers += valuation(k, types) > p ? 1 : 0;
    return p * buyers / count;
  };
  return instance;
}

absl::StatusOr<PricingInstance> Example1Env(int n, double mu) {
  if (!(mu > 0.0 && mu < 0.5)) {
    return absl::InvalidArgumentError("mu must lie in (0, 0.5)");
  }
  return TwoPriceInstance(n, 0.5 + mu, 1.0 + mu, 0.5);
}

absl::StatusOr<PricingInstance> Example3Env(int n, double mu) {
  if (!(mu > 0.0 && mu < 0.5)) {
    return absl::InvalidArgumentError("mu must lie in (0, 0.5)");
  }
  if (n < 2) return absl::InvalidArgumentError("need at least two buyers");
  return TwoPriceInstance(n, 1.0 / n, 1.0 + mu, 1.0 / n);
}

Mechanism Example3Mechanism(const PricingInstance& instance,
                            double impose_weight) {
  return [instance, impose_weight](std::span<const int> announced) {
    const Environment& env = instance.env;
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < env.num_alternatives(); ++s) {
      const double value = instance.objective(announced, s);
      const bool higher = instance.prices[s] > instance.prices[best];
      if (value > best_value + kSlack ||
          (std::abs(value - best_value) <= kSlack && higher)) {
        best = s;
        best_value = value;
      }
    }
    OutcomeDistribution dist(env.num_alternatives());
    if (impose_weight < 1.0) {
      dist.Add({best, 1.0 - impose_weight, std::log1p(-impose_weight), {}});
    }
    if (impose_weight > 0.0) {
      std::vector<int> forced(env.num_agents());
      for (int i = 0; i < env.num_agents(); ++i) {
        forced[i] = OptimalReaction(env, i, announced, best);
      }
      dist.Add({best, impose_weight, std::log(impose_weight),
                std::move(forced)});
    }
    return dist;
  };
}

double ExpectedRevenue(const OutcomeDistribution& dist,
                       const PricingInstance& instance,
                       std::span<const int> types) {
  const Environment& env = instance.env;
  const int n = env.num_agents();
  double total = 0.0;
  for (const Outcome& o : dist.outcomes()) {
    if (o.probability == 0.0) continue;
    int buyers = 0;
    for (int i = 0; i < n; ++i) {
      const int r = o.imposes(i) ? o.imposed[i]
                                 : OptimalReaction(env, i, types, o.alternative);
      buyers += r == instance.buy_reaction ? 1 : 0;
    }
    total += o.probability * instance.prices[o.alternative] * buyers / n;
  }
  return total;
}

}  // namespace impmech

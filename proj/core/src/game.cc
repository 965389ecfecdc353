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

#include "impmech/game.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "impmech/status.h"

namespace impmech {

namespace {

constexpr double kTolerance = 1e-12;

void Keep(VerificationReport& report, double slack, const Witness& witness) {
  if (slack < report.margin) {
    report.margin = slack;
    report.witness = witness;
  }
}

VerificationReport Merge(Property property,
                         const std::vector<VerificationReport>& chunks) {
  VerificationReport report;
  report.property = property;
  report.margin = std::numeric_limits<double>::infinity();
  for (const VerificationReport& c : chunks) {
    report.checked += c.checked;
    if (c.margin < report.margin) {
      report.margin = c.margin;
      report.witness = c.witness;
    }
  }
  return report;
}

int WidestTypeSpace(const Environment& env) {
  int widest = 1;
  for (int c : env.type_counts()) widest = std::max(widest, c);
  return widest;
}

}  // namespace

StrategyProfile TruthfulStrategies(const Environment& env) {
  StrategyProfile strategies(env.num_agents());
  for (int i = 0; i < env.num_agents(); ++i) {
    strategies[i].resize(env.num_types(i));
    for (int x = 0; x < env.num_types(i); ++x) strategies[i][x] = x;
  }
  return strategies;
}

TypeProfile Announce(const StrategyProfile& strategies,
                     std::span<const int> types) {
  TypeProfile announced(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    announced[i] = strategies[i][types[i]];
  }
  return announced;
}

absl::string_view PropertyName(Property property) {
  switch (property) {
    case Property::kExPostNash:
      return "expost_nash";
    case Property::kDominant:
      return "dominant";
    case Property::kStrictlyDominant:
      return "strictly_dominant";
    case Property::kDominated:
      return "dominated";
    case Property::kDp:
      return "dp";
    case Property::kBetaImplementation:
      return "beta_implementation";
  }
  return "unknown";
}

double ExpectedUtility(const Mechanism& mechanism, const Environment& env,
                       const StrategyProfile& strategies, int agent,
                       std::span<const int> types) {
  return ExpectedUtilityOf(mechanism(Announce(strategies, types)), env, agent,
                           types);
}

absl::StatusOr<VerificationReport> CheckExPostNash(
    const Mechanism& mechanism, const Environment& env,
    const StrategyProfile& strategies, const VerifyOptions& options) {
  absl::StatusOr<std::vector<OutcomeDistribution>> table =
      TabulateMechanism(mechanism, env, options);
  if (!table.ok()) return table.status();
  const ProfileSpace space = env.profile_space();
  const int n = env.num_agents();
  if (absl::Status s = CheckBudget(
          SaturatingMul(space.size(), SaturatingMul(n, WidestTypeSpace(env))),
          options.budget, "ex-post Nash check");
      !s.ok()) {
    return s;
  }
  auto chunks = ParallelChunks<VerificationReport>(
      space.size(), options.jobs, [&](std::uint64_t begin, std::uint64_t end) {
        VerificationReport local;
        local.margin = std::numeric_limits<double>::infinity();
        TypeProfile t(n);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          space.Decode(idx, t);
          const TypeProfile a = Announce(strategies, t);
          const std::uint64_t base = space.Encode(a);
          for (int i = 0; i < n; ++i) {
            const double baseline = ExpectedUtilityOf((*table)[base], env, i, t);
            for (int b = 0; b < env.num_types(i); ++b) {
              if (b == a[i]) continue;
              const double deviation = ExpectedUtilityOf(
                  (*table)[space.Replace(base, i, b)], env, i, t);
              ++local.checked;
              Keep(local, baseline - deviation,
                   {i, t, a, b, baseline, deviation});
            }
          }
        }
        return local;
      });
  VerificationReport report = Merge(Property::kExPostNash, chunks);
  report.pass = report.margin >= -kTolerance;
  report.note = "unilateral deviations from W at every true profile";
  return report;
}

absl::StatusOr<VerificationReport> CheckExPostNashTruthful(
    const Mechanism& mechanism, const Environment& env,
    const VerifyOptions& options) {
  return CheckExPostNash(mechanism, env, TruthfulStrategies(env), options);
}

absl::StatusOr<VerificationReport> CheckDominantTruthful(
    const Mechanism& mechanism, const Environment& env, bool strict,
    const VerifyOptions& options) {
  if (env.values_kind() == ValuesKind::kInterdependent) {
    return MakeError(ErrorKind::kWrongValuesKind,
                     "dominance is checked only under private reactions");
  }
  const ProfileSpace space = env.profile_space();
  const int n = env.num_agents();
  if (absl::Status s = CheckBudget(
          SaturatingMul(SaturatingMul(space.size(), space.size()),
                        SaturatingMul(n, WidestTypeSpace(env))),
          options.budget, "dominance check");
      !s.ok()) {
    return s;
  }
  absl::StatusOr<std::vector<OutcomeDistribution>> table =
      TabulateMechanism(mechanism, env, options);
  if (!table.ok()) return table.status();
  auto chunks = ParallelChunks<VerificationReport>(
      space.size(), options.jobs, [&](std::uint64_t begin, std::uint64_t end) {
        VerificationReport local;
        local.margin = std::numeric_limits<double>::infinity();
        TypeProfile t(n), a(n);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          space.Decode(idx, t);
          for (std::uint64_t ann = 0; ann < space.size(); ++ann) {
            space.Decode(ann, a);
            for (int i = 0; i < n; ++i) {
              // Each opponent vector is visited once per agent: only when the
              // agent's own slot already holds the truth.
              if (a[i] != t[i]) continue;
              const double baseline =
                  ExpectedUtilityOf((*table)[ann], env, i, t);
              for (int b = 0; b < env.num_types(i); ++b) {
                if (b == t[i]) continue;
                const double deviation = ExpectedUtilityOf(
                    (*table)[space.Replace(ann, i, b)], env, i, t);
                ++local.checked;
                Keep(local, baseline - deviation,
                     {i, t, a, b, baseline, deviation});
              }
            }
          }
        }
        return local;
      });
  VerificationReport report = Merge(
      strict ? Property::kStrictlyDominant : Property::kDominant, chunks);
  report.pass = strict ? report.margin > kTolerance
                       : report.margin >= -kTolerance;
  report.note = "truth vs every misreport against every opponent announcement";
  return report;
}

absl::StatusOr<VerificationReport> CheckStrictlyDominantTruthful(
    const Mechanism& mechanism, const Environment& env,
    const VerifyOptions& options) {
  return CheckDominantTruthful(mechanism, env, /*strict=*/true, options);
}

absl::StatusOr<std::optional<std::vector<int>>> FindDominatingStrategy(
    const Mechanism& mechanism, const Environment& env, int agent,
    std::span<const int> base, const VerifyOptions& options) {
  const int k = env.num_types(agent);
  if (static_cast<int>(base.size()) != k) {
    return absl::InvalidArgumentError("base map must cover every type");
  }
  std::uint64_t maps = 1;
  for (int x = 0; x < k; ++x) maps = SaturatingMul(maps, k);
  const ProfileSpace space = env.profile_space();
  const ProfileSpace others = space.Without(agent);
  if (absl::Status s = CheckBudget(
          SaturatingMul(maps, k) +
              SaturatingMul(SaturatingMul(others.size(), others.size()),
                            SaturatingMul(k, k)),
          options.budget, "dominating-strategy search");
      !s.ok()) {
    return s;
  }
  absl::StatusOr<std::vector<OutcomeDistribution>> table =
      TabulateMechanism(mechanism, env, options);
  if (!table.ok()) return table.status();

  // utility[x][y][(t_{-i}, a_{-i})] for true own type x announced as y.
  const std::uint64_t cells = others.size() * others.size();
  std::vector<std::vector<std::vector<double>>> utility(
      k, std::vector<std::vector<double>>(k, std::vector<double>(cells)));
  const int n = env.num_agents();
  ParallelFor(others.size(), options.jobs,
              [&](std::uint64_t begin, std::uint64_t end) {
                TypeProfile rest_t(n - 1), rest_a(n - 1), t(n), a(n);
                for (std::uint64_t ti = begin; ti < end; ++ti) {
                  others.Decode(ti, rest_t);
                  for (std::uint64_t ai = 0; ai < others.size(); ++ai) {
                    others.Decode(ai, rest_a);
                    for (int j = 0, r = 0; j < n; ++j) {
                      if (j == agent) continue;
                      t[j] = rest_t[r];
                      a[j] = rest_a[r];
                      ++r;
                    }
                    for (int x = 0; x < k; ++x) {
                      t[agent] = x;
                      for (int y = 0; y < k; ++y) {
                        a[agent] = y;
                        utility[x][y][ti * others.size() + ai] =
                            ExpectedUtilityOf((*table)[space.Encode(a)], env,
                                              agent, t);
                      }
                    }
                  }
                }
              });

  std::vector<std::vector<char>> weakly(k, std::vector<char>(k, 1));
  std::vector<std::vector<char>> strictly(k, std::vector<char>(k, 0));
  for (int x = 0; x < k; ++x) {
    const std::vector<double>& ref = utility[x][base[x]];
    for (int y = 0; y < k; ++y) {
      for (std::uint64_t c = 0; c < cells; ++c) {
        const double diff = utility[x][y][c] - ref[c];
        if (diff < -kTolerance) weakly[x][y] = 0;
        if (diff > kTolerance) strictly[x][y] = 1;
      }
    }
  }
  // Lexicographic order with W^(0) most significant: digit k-1-x is W^(x).
  std::vector<int> digits(k, 0);
  const std::vector<int> radices(k, k);
  do {
    bool ok = true;
    bool strict = false;
    for (int x = 0; x < k && ok; ++x) {
      const int y = digits[k - 1 - x];
      ok = weakly[x][y];
      strict = strict || strictly[x][y];
    }
    if (ok && strict) {
      std::vector<int> map(k);
      for (int x = 0; x < k; ++x) map[x] = digits[k - 1 - x];
      return std::optional<std::vector<int>>(std::move(map));
    }
  } while (NextProfile(digits, radices));
  return std::optional<std::vector<int>>();
}

absl::StatusOr<ImplementationGapReport> ImplementationGap(
    const Mechanism& mechanism, const Environment& env,
    const Objective& objective, const StrategyProfile& strategies,
    std::span<const TypeProfile> probes, const VerifyOptions& options) {
  const ProfileSpace space = env.profile_space();
  const bool exhaustive = probes.empty();
  std::uint64_t count = probes.size();
  if (exhaustive) {
    if (absl::Status s = CheckBudget(
            space.indexable()
                ? SaturatingMul(space.size(), env.num_alternatives())
                : std::numeric_limits<std::uint64_t>::max(),
            options.budget, "implementation gap");
        !s.ok()) {
      return s;
    }
    count = space.size();
  }
  const int n = env.num_agents();
  auto chunks = ParallelChunks<ImplementationGapReport>(
      count, options.jobs, [&](std::uint64_t begin, std::uint64_t end) {
        ImplementationGapReport local;
        local.beta_measured = -std::numeric_limits<double>::infinity();
        TypeProfile t(n);
        for (std::uint64_t k = begin; k < end; ++k) {
          if (exhaustive) {
            space.Decode(k, t);
          } else {
            t = probes[k];
          }
          double best = -std::numeric_limits<double>::infinity();
          std::vector<double> scores(env.num_alternatives());
          for (int s = 0; s < env.num_alternatives(); ++s) {
            scores[s] = objective(t, s);
            best = std::max(best, scores[s]);
          }
          const std::vector<double> marginal =
              mechanism(Announce(strategies, t)).AlternativeMarginal();
          double expected = 0.0;
          for (int s = 0; s < env.num_alternatives(); ++s) {
            expected += marginal[s] * scores[s];
          }
          if (best - expected > local.beta_measured) {
            local.beta_measured = best - expected;
            local.worst_types = t;
          }
          ++local.profiles;
        }
        return local;
      });
  ImplementationGapReport report;
  report.exhaustive = exhaustive;
  report.beta_measured = -std::numeric_limits<double>::infinity();
  for (const ImplementationGapReport& c : chunks) {
    report.profiles += c.profiles;
    if (c.beta_measured > report.beta_measured) {
      report.beta_measured = c.beta_measured;
      report.worst_types = c.worst_types;
    }
  }
  return report;
}

std::vector<TypeProfile> DeterministicProbes(const Environment& env, int count,
                                             RandomStream& stream) {
  std::vector<TypeProfile> probes(count, TypeProfile(env.num_agents()));
  for (TypeProfile& t : probes) {
    for (int i = 0; i < env.num_agents(); ++i) {
      t[i] = static_cast<int>(stream.UniformInt(env.num_types(i)));
    }
  }
  return probes;
}

bool ReplayWitness(const Mechanism& mechanism, const Environment& env,
                   const Witness& witness) {
  if (witness.agent < 0) return false;
  TypeProfile deviated = witness.announced;
  deviated[witness.agent] = witness.deviation;
  const double baseline = ExpectedUtilityOf(mechanism(witness.announced), env,
                                            witness.agent, witness.types);
  const double deviation =
      ExpectedUtilityOf(mechanism(deviated), env, witness.agent, witness.types);
  return std::abs(baseline - witness.baseline_utility) <= kTolerance &&
         std::abs(deviation - witness.deviation_utility) <= kTolerance;
}

}  // namespace impmech

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

#include "impmech/exponential.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "impmech/status.h"

namespace impmech {

OutcomeDistribution ExponentialDistributionFromScores(
    std::span<const double> scores, double rate) {
  const int count = static_cast<int>(scores.size());
  std::vector<double> logits(count);
  double top = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < count; ++s) {
    logits[s] = rate * scores[s];
    top = std::max(top, logits[s]);
  }
  double total = 0.0;
  for (int s = 0; s < count; ++s) total += std::exp(logits[s] - top);
  const double log_norm = top + std::log(total);
  OutcomeDistribution dist(count);
  for (int s = 0; s < count; ++s) {
    const double log_p = logits[s] - log_norm;
    dist.Add({s, std::exp(log_p), log_p, {}});
  }
  return dist;
}

OutcomeDistribution ExponentialDistribution(const Objective& objective,
                                            int num_alternatives,
                                            std::span<const int> types,
                                            double rate) {
  std::vector<double> scores(num_alternatives);
  for (int s = 0; s < num_alternatives; ++s) scores[s] = objective(types, s);
  return ExponentialDistributionFromScores(scores, rate);
}

double PrivacyRate(int n, double eps, double sensitivity) {
  return n * eps / (2.0 * sensitivity);
}

Mechanism ExponentialMechanism(const Objective& objective,
                               const Environment& env, double eps) {
  const double rate = PrivacyRate(env.num_agents(), eps, objective.sensitivity);
  const int count = env.num_alternatives();
  return [objective, count, rate](std::span<const int> announced) {
    return ExponentialDistribution(objective, count, announced, rate);
  };
}

absl::StatusOr<DpAuditReport> AuditDp(const Mechanism& mechanism,
                                      const Environment& env,
                                      double target_eps,
                                      const VerifyOptions& options) {
  absl::StatusOr<std::vector<OutcomeDistribution>> table =
      TabulateMechanism(mechanism, env, options);
  if (!table.ok()) return table.status();
  const ProfileSpace space = env.profile_space();
  const int n = env.num_agents();
  std::vector<std::vector<double>> logs(space.size());
  ParallelFor(space.size(), options.jobs,
              [&](std::uint64_t begin, std::uint64_t end) {
                for (std::uint64_t idx = begin; idx < end; ++idx) {
                  logs[idx] = (*table)[idx].LogAlternativeMarginal();
                }
              });

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  auto chunks = ParallelChunks<DpAuditReport>(
      space.size(), options.jobs, [&](std::uint64_t begin, std::uint64_t end) {
        DpAuditReport local;
        TypeProfile t(n);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          space.Decode(idx, t);
          for (int i = 0; i < n; ++i) {
            for (int other = t[i] + 1; other < env.num_types(i); ++other) {
              const std::uint64_t swapped = space.Replace(idx, i, other);
              ++local.pairs_checked;
              for (int s = 0; s < env.num_alternatives(); ++s) {
                const double a = logs[idx][s];
                const double b = logs[swapped][s];
                if (a == kNegInf && b == kNegInf) continue;
                double ratio;
                if (a == kNegInf || b == kNegInf) {
                  ratio = std::numeric_limits<double>::infinity();
                  if (!local.zero_probability_asymmetry) {
                    local.zero_probability_asymmetry = true;
                    local.epsilon_measured = ratio;
                    local.witness = {i, t, other, s};
                  }
                  continue;
                }
                ratio = std::abs(a - b);
                if (ratio > local.epsilon_measured) {
                  local.epsilon_measured = ratio;
                  local.witness = {i, t, other, s};
                }
              }
            }
          }
        }
        return local;
      });

  DpAuditReport report;
  for (const DpAuditReport& c : chunks) {
    report.pairs_checked += c.pairs_checked;
    if (c.zero_probability_asymmetry && !report.zero_probability_asymmetry) {
      report.zero_probability_asymmetry = true;
      report.epsilon_measured = c.epsilon_measured;
      report.witness = c.witness;
    } else if (!report.zero_probability_asymmetry &&
               c.epsilon_measured > report.epsilon_measured) {
      report.epsilon_measured = c.epsilon_measured;
      report.witness = c.witness;
    }
  }
  report.target_eps = target_eps;
  report.pass = report.epsilon_measured <= target_eps + 1e-9;
  return report;
}

absl::StatusOr<NearIndifferenceReport> CheckNearIndifference(
    const Mechanism& mechanism, const Environment& env, double eps,
    OpponentFamily family, const VerifyOptions& options) {
  absl::StatusOr<std::vector<OutcomeDistribution>> table =
      TabulateMechanism(mechanism, env, options);
  if (!table.ok()) return table.status();
  const ProfileSpace space = env.profile_space();
  const int n = env.num_agents();
  int widest = 1;
  for (int c : env.type_counts()) widest = std::max(widest, c);
  const std::uint64_t announcements =
      family == OpponentFamily::kTruthful ? 1 : space.size();
  if (absl::Status s = CheckBudget(
          SaturatingMul(SaturatingMul(space.size(), announcements),
                        SaturatingMul(n, widest)),
          options.budget, "near-indifference check");
      !s.ok()) {
    return s;
  }

  auto chunks = ParallelChunks<NearIndifferenceReport>(
      space.size(), options.jobs, [&](std::uint64_t begin, std::uint64_t end) {
        NearIndifferenceReport local;
        local.max_swing = -1.0;
        TypeProfile t(n), a(n);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          space.Decode(idx, t);
          for (std::uint64_t ann = 0; ann < announcements; ++ann) {
            const std::uint64_t base =
                family == OpponentFamily::kTruthful ? idx : ann;
            space.Decode(base, a);
            for (int i = 0; i < n; ++i) {
              const double before =
                  ExpectedUtilityOf((*table)[base], env, i, t);
              for (int b = 0; b < env.num_types(i); ++b) {
                if (b == a[i]) continue;
                const double after = ExpectedUtilityOf(
                    (*table)[space.Replace(base, i, b)], env, i, t);
                const double swing = std::abs(before - after);
                if (swing > local.max_swing) {
                  local.max_swing = swing;
                  local.witness = {i, t, a, b, before, after};
                }
              }
            }
          }
        }
        return local;
      });

  NearIndifferenceReport report;
  report.max_swing = 0.0;
  for (const NearIndifferenceReport& c : chunks) {
    if (c.max_swing > report.max_swing) {
      report.max_swing = c.max_swing;
      report.witness = c.witness;
    }
  }
  report.bound = std::expm1(eps);
  report.pass = report.max_swing <= report.bound + 1e-12;
  report.within_two_eps = report.max_swing <= 2.0 * eps + 1e-12;
  return report;
}

double ExpMechAccuracyBound(int n, double eps, double sensitivity,
                   int num_alternatives) {
  const double scale = n * eps / sensitivity;
  return 4.0 / scale * std::log(scale * num_alternatives / 2.0);
}

absl::StatusOr<AccuracyReport> CheckAccuracyBound(
    const Objective& objective, const Environment& env, double eps,
    const VerifyOptions& options) {
  const int n = env.num_agents();
  const double d = objective.sensitivity;
  const int count = env.num_alternatives();
  const double threshold = 2.0 * std::numbers::e * d / (eps * count);
  if (!(n > threshold)) {
    return MakeError(ErrorKind::kPopulationTooSmall,
                     absl::StrCat("accuracy bound needs n > ", threshold,
                                  ", got n = ", n));
  }
  const ProfileSpace space = env.profile_space();
  if (absl::Status s = CheckBudget(
          space.indexable() ? SaturatingMul(space.size(), count)
                            : std::numeric_limits<std::uint64_t>::max(),
          options.budget, "accuracy check");
      !s.ok()) {
    return s;
  }
  const double bound = ExpMechAccuracyBound(n, eps, d, count);
  const double rate = PrivacyRate(n, eps, d);
  auto chunks = ParallelChunks<AccuracyReport>(
      space.size(), options.jobs, [&](std::uint64_t begin, std::uint64_t end) {
        AccuracyReport local;
        local.worst_slack = std::numeric_limits<double>::infinity();
        TypeProfile t(n);
        std::vector<double> scores(count);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          space.Decode(idx, t);
          double best = -std::numeric_limits<double>::infinity();
          for (int s = 0; s < count; ++s) {
            scores[s] = objective(t, s);
            best = std::max(best, scores[s]);
          }
          const OutcomeDistribution dist =
              ExponentialDistributionFromScores(scores, rate);
          double expected = 0.0;
          for (const Outcome& o : dist.outcomes()) {
            expected += o.probability * scores[o.alternative];
          }
          const double slack = expected - (best - bound);
          if (slack < local.worst_slack) {
            local.worst_slack = slack;
            local.worst_types = t;
          }
        }
        return local;
      });
  AccuracyReport report;
  report.bound = bound;
  report.worst_slack = std::numeric_limits<double>::infinity();
  for (const AccuracyReport& c : chunks) {
    if (c.worst_slack < report.worst_slack) {
      report.worst_slack = c.worst_slack;
      report.worst_types = c.worst_types;
    }
  }
  report.pass = report.worst_slack >= -1e-12;
  return report;
}

}  // namespace impmech

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

#include "impmech/combined.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "impmech/exponential.h"
#include "impmech/status.h"

namespace impmech {

namespace {

constexpr std::int64_t kFirstCandidate = 3;
constexpr std::int64_t kSearchCap = std::int64_t{1} << 60;

absl::Status CheckPositive(double d, double gamma, double p_tilde,
                           int s_count) {
  if (!(d > 0.0 && gamma > 0.0 && p_tilde > 0.0)) {
    return MakeError(ErrorKind::kParamContractViolated,
                     "d, gamma and p_tilde must be positive");
  }
  if (s_count < 2) {
    return MakeError(ErrorKind::kParamContractViolated,
                     "schedule needs at least two alternatives");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::int64_t> ComputeN0(double d, double gamma, double p_tilde,
                                       int s_count) {
  if (absl::Status s = CheckPositive(d, gamma, p_tilde, s_count); !s.ok()) {
    return s;
  }
  const double pg = p_tilde * gamma;
  const double c = 8.0 * d / pg;
  const double floor_value =
      std::max(c * std::log(pg * s_count / (2.0 * d)),
               4.0 * std::numbers::e * std::numbers::e * d / (pg * s_count));
  // Both conditions are monotone in n for n >= 3 (n / ln n increases beyond
  // e), so the least witness of an ascending scan is found by bisection.
  auto holds = [&](std::int64_t n) {
    const double x = static_cast<double>(n);
    return x >= floor_value && x / std::log(x) > c;
  };
  std::int64_t hi = kFirstCandidate;
  while (!holds(hi)) {
    if (hi > kSearchCap) {
      return MakeError(ErrorKind::kParamContractViolated,
                       "n0 search overflowed");
    }
    hi *= 2;
  }
  std::int64_t lo = std::max(kFirstCandidate, hi / 2);
  if (holds(lo)) return lo;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

absl::StatusOr<MechanismParams> ScheduleParams(double d, double gamma,
                                               double p_tilde, int s_count,
                                               std::int64_t n) {
  absl::StatusOr<std::int64_t> n0 = ComputeN0(d, gamma, p_tilde, s_count);
  if (!n0.ok()) return n0.status();
  if (n <= *n0) {
    return MakeError(ErrorKind::kPopulationTooSmall,
                     absl::StrCat("n = ", n, " does not exceed n0 = ", *n0));
  }
  const double pg = p_tilde * gamma;
  const double x = static_cast<double>(n);
  const double log_term = std::log(x * pg * s_count / (2.0 * d));
  MechanismParams params;
  params.eps = std::sqrt(pg * d / x) * std::sqrt(log_term);
  params.q = 2.0 * params.eps / pg;
  params.p_tilde = p_tilde;
  params.gamma = gamma;
  params.d = d;
  params.s_count = s_count;
  params.n = n;
  params.n0 = *n0;
  params.beta_bound = 6.0 * std::sqrt(d / (pg * x)) * std::sqrt(log_term);
  return params;
}

absl::StatusOr<MechanismParams> TruthfulnessParams(double d, double gamma,
                                                   double p_tilde, int s_count,
                                                   std::int64_t n,
                                                   double eps) {
  if (absl::Status s = CheckPositive(d, gamma, p_tilde, s_count); !s.ok()) {
    return s;
  }
  MechanismParams params;
  params.eps = eps;
  params.q = 2.0 * eps / (p_tilde * gamma);
  if (!(eps > 0.0) || params.q > 1.0) {
    return MakeError(ErrorKind::kParamContractViolated,
                     absl::StrCat("eps = ", eps, " needs q = ", params.q,
                                  " > 1"));
  }
  params.p_tilde = p_tilde;
  params.gamma = gamma;
  params.d = d;
  params.s_count = s_count;
  params.n = n;
  params.n0 = 0;
  params.beta_bound = std::numeric_limits<double>::infinity();
  return params;
}

ScheduleCheck CheckSchedule(const MechanismParams& params) {
  ScheduleCheck check;
  check.q_below_one = params.q < 1.0;
  check.eps_below_gap = params.eps < params.p_tilde * params.gamma;
  check.population_ok =
      static_cast<double>(params.n) >
      2.0 * std::numbers::e * params.d / (params.eps * params.s_count);
  return check;
}

absl::StatusOr<double> ImplementationBound(const MechanismParams& params,
                                           std::int64_t n) {
  absl::StatusOr<MechanismParams> at =
      ScheduleParams(params.d, params.gamma, params.p_tilde, params.s_count, n);
  if (!at.ok()) return at.status();
  return at->beta_bound;
}

double UniformCommitmentBound(double d, double gamma, int s_count, std::int64_t n) {
  const double x = static_cast<double>(n);
  return 6.0 * std::sqrt(d * s_count / (gamma * x)) *
         std::sqrt(std::log(x * gamma / (2.0 * d)));
}

Mechanism Mixture(double q, Mechanism a, Mechanism b) {
  return [q, a = std::move(a), b = std::move(b)](std::span<const int> t) {
    if (q <= 0.0) return a(t);
    if (q >= 1.0) return b(t);
    return OutcomeDistribution::Mix(q, a(t), b(t));
  };
}

absl::StatusOr<Mechanism> CombinedMechanism(
    const Objective& objective, const Environment& env,
    const CommitmentDistribution& commitment, const MechanismParams& params) {
  if (!(params.eps > 0.0) || !(params.q > 0.0) || params.q > 1.0) {
    return MakeError(ErrorKind::kParamContractViolated,
                     absl::StrCat("need eps > 0 and 0 < q <= 1, got eps = ",
                                  params.eps, ", q = ", params.q));
  }
  const double lhs = params.q * params.p_tilde * params.gamma;
  if (lhs < 2.0 * params.eps * (1.0 - 1e-12)) {
    return MakeError(ErrorKind::kParamContractViolated,
                     absl::StrCat("q p~ gamma = ", lhs, " < 2 eps = ",
                                  2.0 * params.eps));
  }
  if (params.n0 > 0 && env.num_agents() <= params.n0) {
    return MakeError(ErrorKind::kPopulationTooSmall,
                     absl::StrCat("n = ", env.num_agents(),
                                  " does not exceed n0 = ", params.n0));
  }
  return Mixture(params.q, ExponentialMechanism(objective, env, params.eps),
                 CommitmentMechanism(commitment, env));
}

}  // namespace impmech

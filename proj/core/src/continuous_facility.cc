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

#include "impmech/continuous_facility.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "impmech/enumeration.h"
#include "impmech/status.h"

namespace impmech {

SortedLocations::SortedLocations(std::span<const double> locations)
    : sorted_(locations.begin(), locations.end()) {
  std::sort(sorted_.begin(), sorted_.end());
  prefix_.resize(sorted_.size() + 1, 0.0L);
  for (std::size_t k = 0; k < sorted_.size(); ++k) {
    prefix_[k + 1] = prefix_[k] + sorted_[k];
  }
}

long double SortedLocations::SegmentDistance(std::size_t lo, std::size_t hi,
                                             double c) const {
  if (lo >= hi) return 0.0L;
  const std::size_t split =
      std::lower_bound(sorted_.begin() + lo, sorted_.begin() + hi, c) -
      sorted_.begin();
  const long double below =
      static_cast<long double>(c) * (split - lo) - (prefix_[split] - prefix_[lo]);
  const long double above =
      (prefix_[hi] - prefix_[split]) - static_cast<long double>(c) * (hi - split);
  return below + above;
}

double SortedLocations::TotalDistance(std::span<const double> facilities) const {
  std::vector<double> c(facilities.begin(), facilities.end());
  std::sort(c.begin(), c.end());
  long double total = 0.0L;
  std::size_t start = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    std::size_t end = sorted_.size();
    if (k + 1 < c.size()) {
      const double mid = 0.5 * (c[k] + c[k + 1]);
      end = std::upper_bound(sorted_.begin() + start, sorted_.end(), mid) -
            sorted_.begin();
    }
    total += SegmentDistance(start, end, c[k]);
    start = end;
  }
  return static_cast<double>(total);
}

double SortedLocations::Objective(std::span<const double> facilities) const {
  return 1.0 - TotalDistance(facilities) / size();
}

double NearestFacility(double x, std::span<const double> facilities) {
  double best = facilities.front();
  for (double c : facilities) {
    const double gap = std::abs(x - c);
    const double incumbent = std::abs(x - best);
    if (gap < incumbent || (gap == incumbent && c < best)) best = c;
  }
  return best;
}

double DirectFacilityObjective(std::span<const double> locations,
                               std::span<const double> facilities) {
  double total = 0.0;
  for (double x : locations) {
    total += 1.0 - std::abs(x - NearestFacility(x, facilities));
  }
  return total / static_cast<double>(locations.size());
}

absl::StatusOr<FacilityGrid> FacilityGrid::Create(int k, double rho,
                                                  std::uint64_t max_support) {
  int exponent = 0;
  if (k < 1) return absl::InvalidArgumentError("need at least one facility");
  if (!(rho > 0.0 && rho <= 1.0) || std::frexp(rho, &exponent) != 0.5) {
    return absl::InvalidArgumentError(
        absl::StrCat("resolution ", rho, " is not a power of two in (0, 1]"));
  }
  const int per_axis = static_cast<int>(std::lround(1.0 / rho)) + 1;
  std::uint64_t size = 1;
  for (int j = 0; j < k; ++j) size = SaturatingMul(size, per_axis);
  if (size > max_support) {
    return MakeError(ErrorKind::kResolutionBudgetExceeded,
                     absl::StrCat("grid has ", size, " alternatives, cap is ",
                                  max_support));
  }
  return FacilityGrid(k, rho, per_axis, size);
}

void FacilityGrid::Facilities(std::uint64_t index, std::span<double> out) const {
  for (int j = 0; j < k_; ++j) {
    out[j] = static_cast<double>(index % per_axis_) * rho_;
    index /= per_axis_;
  }
}

std::vector<double> FacilityGrid::Facilities(std::uint64_t index) const {
  std::vector<double> out(k_);
  Facilities(index, out);
  return out;
}

std::vector<double> FacilityGrid::Objectives(
    const SortedLocations& locations) const {
  std::vector<double> values(size_);
  std::vector<double> sites(k_);
  for (std::uint64_t s = 0; s < size_; ++s) {
    Facilities(s, sites);
    values[s] = locations.Objective(sites);
  }
  return values;
}

GridExpMech GridExpMechFromObjectives(std::span<const double> objectives,
                                      double rate) {
  GridExpMech dist;
  dist.rate = rate;
  double top = -std::numeric_limits<double>::infinity();
  for (double f : objectives) top = std::max(top, rate * f);
  double total = 0.0;
  for (double f : objectives) total += std::exp(rate * f - top);
  const double log_norm = top + std::log(total);
  dist.probabilities.reserve(objectives.size());
  dist.log_probabilities.reserve(objectives.size());
  for (double f : objectives) {
    const double log_p = rate * f - log_norm;
    dist.log_probabilities.push_back(log_p);
    dist.probabilities.push_back(std::exp(log_p));
  }
  return dist;
}

absl::StatusOr<GridExpMech> ContinuousExpMechDistribution(
    const FacilityGrid& grid, std::span<const double> announced, double eps) {
  if (announced.empty()) return absl::InvalidArgumentError("no agents");
  if (!(eps >= 0.0)) return absl::InvalidArgumentError("eps must be >= 0");
  const SortedLocations locations(announced);
  return GridExpMechFromObjectives(grid.Objectives(locations),
                                   announced.size() * eps / 2.0);
}

std::vector<double> SampleGridExpMech(const FacilityGrid& grid,
                                      const GridExpMech& dist,
                                      RandomStream& stream) {
  const double u = stream.Uniform();
  double cumulative = 0.0;
  std::uint64_t pick = dist.probabilities.size() - 1;
  for (std::uint64_t s = 0; s < dist.probabilities.size(); ++s) {
    cumulative += dist.probabilities[s];
    if (u < cumulative) {
      pick = s;
      break;
    }
  }
  return grid.Facilities(pick);
}

absl::StatusOr<std::vector<double>> ContinuousExpMechSample(
    std::span<const double> announced, double eps, int k, double rho,
    RandomStream& stream, std::uint64_t max_support) {
  absl::StatusOr<FacilityGrid> grid = FacilityGrid::Create(k, rho, max_support);
  if (!grid.ok()) return grid.status();
  absl::StatusOr<GridExpMech> dist =
      ContinuousExpMechDistribution(*grid, announced, eps);
  if (!dist.ok()) return dist.status();
  return SampleGridExpMech(*grid, *dist, stream);
}

absl::StatusOr<DyadicCommitment> DyadicCommitment::Create(int m_bar, int k) {
  if (m_bar < 1) return absl::InvalidArgumentError("m_bar must be >= 1");
  if (k < 2) {
    return absl::InvalidArgumentError(
        "dyadic commitment needs at least two facilities to separate");
  }
  return DyadicCommitment(m_bar, k);
}

std::vector<double> DyadicCommitment::Sample(RandomStream& stream) const {
  const int x = 1 + static_cast<int>(stream.UniformInt(m_bar_));
  const double scale = std::ldexp(1.0, x);
  const double y = stream.Uniform(0.0, scale - 1.0);
  std::vector<double> sites(k_, (y + 1.0) / scale);
  sites[0] = y / scale;
  return sites;
}

namespace {

// Facility nearest to `report` given the pair (a, a + h); ties go low.
double Assigned(double report, double a, double h) {
  return report <= a + 0.5 * h ? a : a + h;
}

// Sorted cut points of [0, length] at the given interior breakpoints.
std::vector<double> Pieces(double length, std::initializer_list<double> cuts) {
  std::vector<double> points = {0.0, length};
  for (double c : cuts) {
    if (c > 0.0 && c < length) points.push_back(c);
  }
  std::sort(points.begin(), points.end());
  return points;
}

}  // namespace

double DyadicCommitment::LevelIntegral(int x, double t, double b) const {
  const double h = std::ldexp(1.0, -x);
  const double length = 1.0 - h;
  const std::vector<double> points =
      Pieces(length, {b - 0.5 * h, t - 0.5 * h, t, t - h});
  double integral = 0.0;
  // The integrand is linear on every piece, so the midpoint rule is exact.
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double width = points[k + 1] - points[k];
    if (width <= 0.0) continue;
    const double a = 0.5 * (points[k] + points[k + 1]);
    integral += width * (1.0 - std::abs(t - Assigned(b, a, h)));
  }
  return integral / length;
}

double DyadicCommitment::ExpectedUtility(double t, double b) const {
  double total = 0.0;
  for (int x = 1; x <= m_bar_; ++x) total += LevelIntegral(x, t, b);
  return total / m_bar_;
}

double DyadicCommitment::ExpectedLoss(double t, double b) const {
  return ExpectedUtility(t, t) - ExpectedUtility(t, b);
}

DyadicCommitment::FavorableEvent DyadicCommitment::Favorable(double t,
                                                             double b) const {
  FavorableEvent event;
  const double delta = std::abs(t - b);
  if (delta == 0.0) return event;
  int x = 1;
  while (x < m_bar_ && !(std::ldexp(1.0, -x) < 0.5 * delta)) ++x;
  event.x = x;
  const double h = std::ldexp(1.0, -x);
  const double length = 1.0 - h;
  double lo, hi;
  if (b < t) {
    lo = b;
    hi = 0.5 * (b + t);
  } else {
    lo = 0.5 * (b + t) - h;
    hi = b - h;
  }
  lo = std::max(lo, 0.0);
  hi = std::min(hi, length);
  if (hi <= lo) return event;
  event.probability = (hi - lo) / length / m_bar_;
  // Loss is linear between breakpoints; take one-sided limits at both ends
  // of every piece with the reactions fixed at the piece's midpoint.
  std::vector<double> points = {lo, hi};
  for (double c : {b - 0.5 * h, t - 0.5 * h, t, t - h}) {
    if (c > lo && c < hi) points.push_back(c);
  }
  std::sort(points.begin(), points.end());
  event.min_loss = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double mid = 0.5 * (points[k] + points[k + 1]);
    const bool truth_low = Assigned(t, mid, h) == mid;
    const bool report_low = Assigned(b, mid, h) == mid;
    for (double a : {points[k], points[k + 1]}) {
      const double r_t = truth_low ? a : a + h;
      const double r_b = report_low ? a : a + h;
      event.min_loss =
          std::min(event.min_loss, std::abs(t - r_b) - std::abs(t - r_t));
    }
  }
  return event;
}

double DyadicCommitment::ExpectedObjective(
    std::span<const double> locations) const {
  double total = 0.0;
  for (double t : locations) total += ExpectedUtility(t, t);
  return total / static_cast<double>(locations.size());
}

Loc3Params ComputeLoc3Params(std::int64_t n, int k) {
  Loc3Params p;
  const double x = static_cast<double>(n);
  const double root = std::sqrt(k + 1.0);
  p.n = n;
  p.k = k;
  p.eps = std::pow(x, -2.0 / 3.0) * root;
  p.m_bar_raw =
      std::ceil(std::log2(std::cbrt(x) / (6.0 * root * std::log(x))));
  p.m_bar = static_cast<int>(std::max(1.0, p.m_bar_raw));
  p.q = 16.0 * p.eps * p.m_bar * std::ldexp(1.0, p.m_bar);
  p.accuracy_target = 32.0 * root / std::cbrt(x) * std::log(x);
  const double ne = x * p.eps;
  p.alpha = 2.0 / ne * std::log(std::numbers::e + std::pow(ne, k + 1.0));
  return p;
}

double FacilityAccuracyBound(std::int64_t n, double eps, int k) {
  const double ne = static_cast<double>(n) * eps;
  return 6.0 / ne * std::log(std::numbers::e + std::pow(ne, k + 1.0));
}

bool Loc3ConditionsHold(const Loc3Params& p) {
  const double x = static_cast<double>(p.n);
  const double split = 6.0 * std::sqrt(p.k + 1.0) / std::cbrt(x) * std::log(x);
  return p.q < 1.0 && p.alpha <= 0.5 && p.m_bar <= std::log(x) &&
         p.m_bar_raw >= 1.0 && FacilityAccuracyBound(p.n, p.eps, p.k) <= split;
}

absl::StatusOr<std::int64_t> Loc3N0(int k) {
  if (k < 1) return absl::InvalidArgumentError("need at least one facility");
  auto holds = [k](std::int64_t n) {
    return Loc3ConditionsHold(ComputeLoc3Params(n, k));
  };
  std::int64_t hi = 3;
  while (!holds(hi)) {
    if (hi > (std::int64_t{1} << 50)) {
      return absl::InternalError("LOC3 threshold search overflowed");
    }
    hi *= 2;
  }
  std::int64_t lo = hi / 2;
  if (lo < 3) return hi;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (holds(mid) ? hi : lo) = mid;
  }
  // n0 is the largest failing n, so the guarantee applies for n > n0.
  return lo;
}

bool Loc3DominationHolds(const Loc3Params& p) {
  const double delta = std::ldexp(1.0, -(p.m_bar - 1));
  return p.q * delta * delta / (8.0 * p.m_bar) >= 2.0 * p.eps * delta;
}

double Loc3GapBound(const Loc3Params& p, double rho) {
  return 2.0 * std::ldexp(1.0, -(p.m_bar - 1)) +
         FacilityAccuracyBound(p.n, p.eps, p.k) + p.q + 2.0 * rho;
}

absl::StatusOr<Loc3Mechanism> Loc3Mechanism::Create(std::int64_t n, int k,
                                                    double rho,
                                                    std::uint64_t max_support) {
  absl::StatusOr<std::int64_t> n0 = Loc3N0(k);
  if (!n0.ok()) return n0.status();
  if (n <= *n0) {
    return MakeError(ErrorKind::kPopulationTooSmall,
                     absl::StrCat("LOC3 needs n > ", *n0, ", got ", n));
  }
  absl::StatusOr<FacilityGrid> grid = FacilityGrid::Create(k, rho, max_support);
  if (!grid.ok()) return grid.status();
  const Loc3Params params = ComputeLoc3Params(n, k);
  absl::StatusOr<DyadicCommitment> commitment =
      DyadicCommitment::Create(params.m_bar, k);
  if (!commitment.ok()) return commitment.status();
  return Loc3Mechanism(params, *grid, *commitment);
}

absl::StatusOr<Loc3Evaluation> Loc3Mechanism::Evaluate(
    std::span<const double> truth, std::span<const double> announced) const {
  if (static_cast<std::int64_t>(truth.size()) != params_.n ||
      announced.size() != truth.size()) {
    return absl::InvalidArgumentError("profiles must have n entries");
  }
  const std::vector<double> scores =
      grid_.Objectives(SortedLocations(truth));
  absl::StatusOr<GridExpMech> dist =
      ContinuousExpMechDistribution(grid_, announced, params_.eps);
  if (!dist.ok()) return dist.status();
  Loc3Evaluation out;
  double exp_part = 0.0;
  out.grid_max = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < scores.size(); ++s) {
    exp_part += dist->probabilities[s] * scores[s];
    out.grid_max = std::max(out.grid_max, scores[s]);
  }
  out.expected_objective = (1.0 - params_.q) * exp_part +
                           params_.q * commitment_.ExpectedObjective(truth);
  out.continuous_max_upper = out.grid_max + 0.5 * grid_.rho();
  out.gap = out.continuous_max_upper - out.expected_objective;
  return out;
}

std::pair<std::vector<double>, bool> Loc3Mechanism::Sample(
    std::span<const double> announced, RandomStream& stream) const {
  if (stream.Uniform() < params_.q) {
    return {commitment_.Sample(stream), true};
  }
  absl::StatusOr<GridExpMech> dist =
      ContinuousExpMechDistribution(grid_, announced, params_.eps);
  return {SampleGridExpMech(grid_, *dist, stream), false};
}

absl::StatusOr<LipschitzReport> LipschitzChecks(std::span<const double> t,
                                                std::span<const double> b,
                                                const FacilityGrid& grid,
                                                int probes,
                                                RandomStream& stream) {
  if (t.size() != b.size() || t.empty()) {
    return absl::InvalidArgumentError("profiles must be non-empty, same size");
  }
  const SortedLocations st(t), sb(b);
  double l1 = 0.0;
  LipschitzReport report;
  for (std::size_t i = 0; i < t.size(); ++i) {
    l1 += std::abs(t[i] - b[i]);
    report.max_shift = std::max(report.max_shift, std::abs(t[i] - b[i]));
  }
  l1 /= static_cast<double>(t.size());
  report.pointwise_excess = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < probes; ++p) {
    const std::vector<double> sites =
        grid.Facilities(stream.UniformInt(grid.size()));
    const double diff = std::abs(st.Objective(sites) - sb.Objective(sites));
    report.pointwise_excess = std::max(report.pointwise_excess, diff - l1);
  }
  report.probes = probes;
  const std::vector<double> ft = grid.Objectives(st);
  const std::vector<double> fb = grid.Objectives(sb);
  report.max_difference = std::abs(*std::max_element(ft.begin(), ft.end()) -
                                   *std::max_element(fb.begin(), fb.end()));
  report.pointwise_pass = probes == 0 || report.pointwise_excess <= 1e-12;
  report.max_pass = report.max_difference <= report.max_shift + grid.rho() + 1e-12;
  return report;
}

absl::StatusOr<double> ContinuousDeviationGain(const FacilityGrid& grid,
                                      std::span<const double> t, int agent,
                                      double b, double eps) {
  if (agent < 0 || agent >= static_cast<int>(t.size())) {
    return absl::InvalidArgumentError("agent out of range");
  }
  std::vector<double> deviated(t.begin(), t.end());
  deviated[agent] = b;
  absl::StatusOr<GridExpMech> truthful =
      ContinuousExpMechDistribution(grid, t, eps);
  if (!truthful.ok()) return truthful.status();
  absl::StatusOr<GridExpMech> lying =
      ContinuousExpMechDistribution(grid, deviated, eps);
  if (!lying.ok()) return lying.status();
  double gain = 0.0;
  std::vector<double> sites(grid.k());
  for (std::uint64_t s = 0; s < grid.size(); ++s) {
    grid.Facilities(s, sites);
    const double u = 1.0 - std::abs(t[agent] - NearestFacility(t[agent], sites));
    gain += (lying->probabilities[s] - truthful->probabilities[s]) * u;
  }
  return gain;
}

}  // namespace impmech

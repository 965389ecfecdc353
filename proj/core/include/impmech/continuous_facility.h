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

#ifndef IMPMECH_CONTINUOUS_FACILITY_H_
#define IMPMECH_CONTINUOUS_FACILITY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "impmech/random.h"

namespace impmech {

// Agent locations in [0, 1], sorted with prefix sums so that the facility
// objective costs O(K log n) per alternative.
class SortedLocations {
 public:
  explicit SortedLocations(std::span<const double> locations);

  int size() const { return static_cast<int>(sorted_.size()); }

  // Sum over agents of the distance to the nearest facility.
  double TotalDistance(std::span<const double> facilities) const;

  // F = 1 - TotalDistance / n: average of u_i = 1 - |t_i - nearest|.
  double Objective(std::span<const double> facilities) const;

 private:
  // Sum of |t - c| over sorted agents with index in [lo, hi).
  long double SegmentDistance(std::size_t lo, std::size_t hi, double c) const;

  std::vector<double> sorted_;
  std::vector<long double> prefix_;
};

// Reference O(nK) evaluation of the same objective.
double DirectFacilityObjective(std::span<const double> locations,
                               std::span<const double> facilities);

// Nearest facility to x, ties toward the smaller coordinate.
double NearestFacility(double x, std::span<const double> facilities);

inline constexpr std::uint64_t kDefaultSupportCap = std::uint64_t{1} << 22;
inline constexpr double kDefaultResolution = 1.0 / 1024;

// The rho-grid {0, rho, ..., 1}^K used in place of the continuous
// alternative set. Alternative index has coordinate 0 least significant.
class FacilityGrid {
 public:
  // InvalidArgument unless rho is a power of two in (0, 1];
  // kResolutionBudgetExceeded when (1/rho + 1)^K exceeds `max_support`.
  static absl::StatusOr<FacilityGrid> Create(
      int k, double rho, std::uint64_t max_support = kDefaultSupportCap);

  int k() const { return k_; }
  double rho() const { return rho_; }
  int points_per_axis() const { return per_axis_; }
  std::uint64_t size() const { return size_; }

  void Facilities(std::uint64_t index, std::span<double> out) const;
  std::vector<double> Facilities(std::uint64_t index) const;

  // F at every grid alternative.
  std::vector<double> Objectives(const SortedLocations& locations) const;

 private:
  FacilityGrid(int k, double rho, int per_axis, std::uint64_t size)
      : k_(k), rho_(rho), per_axis_(per_axis), size_(size) {}

  int k_;
  double rho_;
  int per_axis_;
  std::uint64_t size_;
};

// Exponential mechanism over the grid at rate n eps / 2 (F is 1-sensitive in
// the sense |F(t,s) - F(b,s)| <= |t_i - b_i| / n).
struct GridExpMech {
  std::vector<double> probabilities;
  std::vector<double> log_probabilities;
  double rate = 0.0;
};

GridExpMech GridExpMechFromObjectives(std::span<const double> objectives,
                                      double rate);

absl::StatusOr<GridExpMech> ContinuousExpMechDistribution(
    const FacilityGrid& grid, std::span<const double> announced, double eps);

// Inverse-CDF draw of facility locations.
std::vector<double> SampleGridExpMech(const FacilityGrid& grid,
                                      const GridExpMech& dist,
                                      RandomStream& stream);

// Convenience: build the grid, the distribution, and draw once.
absl::StatusOr<std::vector<double>> ContinuousExpMechSample(
    std::span<const double> announced, double eps, int k, double rho,
    RandomStream& stream, std::uint64_t max_support = kDefaultSupportCap);

// The imposing commitment mechanism for continuous locations: X uniform on
// {1, ..., m_bar}, Y uniform on [0, 2^X - 1]; one facility at Y / 2^X and
// K - 1 facilities at (Y + 1) / 2^X. Agents are forced to the facility
// nearest to their announcement.
class DyadicCommitment {
 public:
  // InvalidArgument unless m_bar >= 1 and k >= 2.
  static absl::StatusOr<DyadicCommitment> Create(int m_bar, int k);

  int m_bar() const { return m_bar_; }
  int k() const { return k_; }

  std::vector<double> Sample(RandomStream& stream) const;

  // Exact E[u(t, forced reaction for announcement b)], u = 1 - distance.
  double ExpectedUtility(double t, double b) const;

  // Exact E[u at truth] - E[u when committed to b].
  double ExpectedLoss(double t, double b) const;

  struct FavorableEvent {
    int x = 0;                 // the level used
    double probability = 0.0;  // P(X = x and Y in the favourable window)
    double min_loss = 0.0;     // smallest loss inside the window
  };
  // The (X, Y) window singled out in the loss argument: 2^-X just below
  // |t - b| / 2, facility between b and the midpoint.
  FavorableEvent Favorable(double t, double b) const;

  // Exact E_P[F(t, s)] (all agents truthful, so reactions are optimal).
  double ExpectedObjective(std::span<const double> locations) const;

 private:
  DyadicCommitment(int m_bar, int k) : m_bar_(m_bar), k_(k) {}

  // Integral over a in [0, 1 - h] of the utility, h = 2^-x.
  double LevelIntegral(int x, double t, double b) const;

  int m_bar_;
  int k_;
};

struct Loc3Params {
  std::int64_t n = 0;
  int k = 1;
  double eps = 0.0;
  double m_bar_raw = 0.0;  // ceil(log2(n^(1/3) / (6 sqrt(K+1) ln n)))
  int m_bar = 1;           // max(1, m_bar_raw)
  double q = 0.0;          // 16 eps m_bar 2^m_bar
  double accuracy_target = 0.0;  // 32 sqrt(K+1) n^(-1/3) ln n
  double alpha = 0.0;            // (2 / (n eps)) ln(e + (n eps)^(K+1))
};

Loc3Params ComputeLoc3Params(std::int64_t n, int k);

// q < 1, alpha <= 0.5, m_bar <= ln n, m_bar_raw >= 1 and the exponential
// error (6 / (n eps)) ln(e + (n eps)^(K+1)) <= 6 sqrt(K+1) n^(-1/3) ln n.
bool Loc3ConditionsHold(const Loc3Params& params);

// Largest n at which Loc3ConditionsHold fails; the conditions hold above it.
absl::StatusOr<std::int64_t> Loc3N0(int k);

// True iff q * delta^2 / (8 m_bar) >= 2 eps delta at delta = 2^-(m_bar-1).
bool Loc3DominationHolds(const Loc3Params& params);

// (6 / (n eps)) ln(e + (n eps)^(K+1)).
double FacilityAccuracyBound(std::int64_t n, double eps, int k);

// 2 * 2^-(m_bar-1) + FacilityAccuracyBound + q + 2 rho.
double Loc3GapBound(const Loc3Params& params, double rho);

struct Loc3Evaluation {
  double expected_objective = 0.0;  // at the true locations
  double grid_max = 0.0;
  // Upper bound on the continuous optimum: grid max + rho / 2.
  double continuous_max_upper = 0.0;
  double gap = 0.0;  // continuous_max_upper - expected_objective
};

// Mixture (1 - q) grid exponential mechanism + q dyadic commitment, run on
// `announced` and scored at `truth`. kPopulationTooSmall when n <= n0(K).
class Loc3Mechanism {
 public:
  static absl::StatusOr<Loc3Mechanism> Create(std::int64_t n, int k,
                                              double rho = kDefaultResolution,
                                              std::uint64_t max_support =
                                                  kDefaultSupportCap);

  const Loc3Params& params() const { return params_; }
  const FacilityGrid& grid() const { return grid_; }

  absl::StatusOr<Loc3Evaluation> Evaluate(
      std::span<const double> truth, std::span<const double> announced) const;

  // Facilities plus whether the commitment branch (imposition) was drawn.
  std::pair<std::vector<double>, bool> Sample(std::span<const double> announced,
                                              RandomStream& stream) const;

 private:
  Loc3Mechanism(Loc3Params params, FacilityGrid grid, DyadicCommitment commit)
      : params_(params), grid_(grid), commitment_(commit) {}

  Loc3Params params_;
  FacilityGrid grid_;
  DyadicCommitment commitment_;
};

struct LipschitzReport {
  // max over probes of |F(t,s) - F(b,s)| - sum_i |t_i - b_i| / n.
  double pointwise_excess = 0.0;
  // |grid max F(t) - grid max F(b)| and max_i |t_i - b_i|.
  double max_difference = 0.0;
  double max_shift = 0.0;
  bool pointwise_pass = false;
  bool max_pass = false;  // max_difference <= max_shift + rho
  int probes = 0;
};

// Pointwise check on `probes` random alternatives plus the grid-max check.
absl::StatusOr<LipschitzReport> LipschitzChecks(std::span<const double> t,
                                                std::span<const double> b,
                                                const FacilityGrid& grid,
                                                int probes,
                                                RandomStream& stream);

// E_{M(b_i, t_-i)} u_i(t_i, s) - E_{M(t)} u_i(t_i, s) for the grid
// exponential mechanism at rate n eps / 2.
absl::StatusOr<double> ContinuousDeviationGain(const FacilityGrid& grid,
                                      std::span<const double> t, int agent,
                                      double b, double eps);

}  // namespace impmech

#endif  // IMPMECH_CONTINUOUS_FACILITY_H_

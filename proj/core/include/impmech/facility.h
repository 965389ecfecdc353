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

#ifndef IMPMECH_FACILITY_H_
#define IMPMECH_FACILITY_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "impmech/combined.h"
#include "impmech/commitment.h"
#include "impmech/environment.h"
#include "impmech/outcome.h"

namespace impmech {

// K facilities on the grid L(m) = {0, 1/m, ..., 1}. Types and reactions are
// grid indices; alternatives are K-tuples of grid indices (coordinate 0 least
// significant). Utility 1 - |t - r| if r hosts a facility, else 0, i.e. the
// raw -|t - r| / -1 shifted by one.
struct GridFacilityInstance {
  int n = 0;
  int m = 0;
  int k = 0;
  Environment env;
  Objective objective;  // average utility, d = 1
  double declared_gamma = 0.0;  // 1/m
  ProfileSpace alternatives;    // L(m)^K

  // Facility locations (grid indices) of alternative s.
  std::vector<int> Facilities(int s) const;
};

absl::StatusOr<GridFacilityInstance> BuildGridFacilityEnv(int n, int m, int k);

// Uniform P over L(m)^K: p~ = 1/(m+1)^K.
absl::StatusOr<CommitmentDistribution> Loc1Commitment(
    const GridFacilityInstance& instance);

// Uniform over the m dyads (one facility at j/m, K-1 at (j+1)/m): p~ = 1/m.
// kNotNonTrivial when K < 2 (the dyads then do not separate).
absl::StatusOr<CommitmentDistribution> Loc2Commitment(
    const GridFacilityInstance& instance);

// Scheduled params with d = 1, gamma = 1/m and the respective p~.
absl::StatusOr<MechanismParams> Loc1Params(int n, int m, int k);
absl::StatusOr<MechanismParams> Loc2Params(int n, int m, int k);

// 6 sqrt(m (m+1)^K / n) sqrt(ln(n / 2m)).
double Loc1Bound(std::int64_t n, int m, int k);
// 6 sqrt(m^2 / n) sqrt(ln(n (m+1)^K / 2m^2)).
double Loc2Bound(std::int64_t n, int m, int k);

// Combined mechanism at the given params (scheduled or truthfulness-only).
absl::StatusOr<Mechanism> Loc1Mechanism(const GridFacilityInstance& instance,
                                        const MechanismParams& params);
absl::StatusOr<Mechanism> Loc2Mechanism(const GridFacilityInstance& instance,
                                        const MechanismParams& params);

}  // namespace impmech

#endif  // IMPMECH_FACILITY_H_

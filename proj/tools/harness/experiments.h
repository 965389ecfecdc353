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

#ifndef IMPMECH_TOOLS_HARNESS_EXPERIMENTS_H_
#define IMPMECH_TOOLS_HARNESS_EXPERIMENTS_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "harness/config.h"
#include "harness/results.h"

namespace impmech::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitConfigInvalid = 2;
inline constexpr int kExitBudgetExceeded = 3;

struct RunOptions {
  int jobs = 1;
};

// Runs one experiment. Rows carry pass/fail per declared assertion; a
// non-OK status means the experiment could not be carried out.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config,
                                               const RunOptions& options = {});

// Exit code for a failed run: 2 for config/precondition problems, 3 for
// budget overruns, 1 otherwise.
int ExitCodeFor(const absl::Status& status);

// The n-grid a sweep visits: explicit values, or a geometric grid starting
// at n0 + 1 and spanning the configured decades.
std::vector<std::int64_t> SweepPoints(const ExperimentConfig& config,
                                      std::int64_t n0);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace impmech::harness

#endif  // IMPMECH_TOOLS_HARNESS_EXPERIMENTS_H_

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

#ifndef IMPMECH_TOOLS_HARNESS_RESULTS_H_
#define IMPMECH_TOOLS_HARNESS_RESULTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "json.hpp"

namespace impmech::harness {

// One CSV line. Unset numeric fields print as empty cells.
struct ResultRow {
  std::string experiment_id;
  std::optional<std::int64_t> n;
  std::optional<double> eps;
  std::optional<double> q;
  std::optional<std::int64_t> n0;
  std::optional<double> p_tilde;
  std::optional<double> gamma;
  std::optional<double> d;
  std::optional<int> s_count;
  std::optional<double> beta_bound;
  std::optional<double> beta_measured;
  std::string property;
  bool pass = false;
  std::optional<double> margin;
  double wall_clock_s = 0.0;
  std::uint64_t seed = 0;
  // Sidecar-only detail: witness tuples, probe counts, notes.
  nlohmann::json detail = nlohmann::json::object();
};

// Fixed column order, also the ResultRow field order.
inline constexpr const char* kCsvColumns[] = {
    "experiment_id", "n",         "eps",           "q",
    "n0",            "p_tilde",   "gamma",         "d",
    "s_count",       "beta_bound", "beta_measured", "property",
    "pass",          "margin",    "wall_clock_s",  "seed"};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  nlohmann::json summary = nlohmann::json::object();

  bool AllPass() const;
};

// Doubles use %.17g; wall-clock is left blank unless `timing` is set so that
// reruns are byte-identical.
std::string FormatCsv(const std::vector<ResultRow>& rows, bool timing);

// Full rows (always with wall-clock), detail and summary.
nlohmann::json FormatSidecar(const ExperimentResult& result,
                             const nlohmann::json& config);

// Writes to a temporary sibling, then renames over `path`.
absl::Status WriteAtomically(const std::string& path,
                             const std::string& content);

}  // namespace impmech::harness

#endif  // IMPMECH_TOOLS_HARNESS_RESULTS_H_

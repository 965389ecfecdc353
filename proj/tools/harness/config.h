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

#ifndef IMPMECH_TOOLS_HARNESS_CONFIG_H_
#define IMPMECH_TOOLS_HARNESS_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace impmech::harness {

enum class ExperimentKind {
  kVerify,
  kGapSweep,
  kExample1,
  kExample3,
  kPricing,
  kFacility,
};

absl::string_view ExperimentKindName(ExperimentKind kind);

struct FacilityConfig {
  int n = 3;
  int m = 2;
  int k = 2;
  std::string mechanism = "loc2";  // loc1 | loc2 | loc3
  std::optional<double> rho;       // loc3 only; default 2^-10
  std::optional<double> eps;       // small-n verification; default p~g/4
};

struct PricingConfig {
  int cohorts = 2;
  int cohort_size = 2;
  int grid_m = 4;
  std::vector<int> signal_counts;  // empty: binary signals
  std::vector<std::vector<double>> valuation_table;  // empty: default table
  std::optional<double> eps;
};

struct ExampleConfig {
  int n = 6;
  double mu = 0.25;
  double eps = 0.1;
  int revenue_n = 200;             // example1: large-n revenue comparison
  std::optional<double> impose_weight;  // example3; default 1/n
};

struct SweepGrid {
  int decades = 2;
  int points_per_decade = 4;
};

struct Budgets {
  std::uint64_t enumeration_cap = 10'000'000;
  int probes = 200;
  int monte_carlo_draws = 0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kVerify;
  std::string id;
  std::uint64_t seed = 0;
  std::string application = "facility";  // verify / gap_sweep target
  FacilityConfig facility;
  PricingConfig pricing;
  ExampleConfig example;
  std::vector<std::int64_t> n_values;  // explicit sweep list
  std::optional<SweepGrid> n_grid;     // geometric grid above n0
  Budgets budgets;
  std::string output;
};

// Schema-checked parse; unknown fields and ill-typed values are
// kConfigInvalid.
absl::StatusOr<ExperimentConfig> ParseConfig(const nlohmann::json& document);
absl::StatusOr<ExperimentConfig> ParseConfigText(absl::string_view text);
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);

// Default config for an experiment kind (used when no file is given).
ExperimentConfig DefaultConfig(ExperimentKind kind);

nlohmann::json ConfigToJson(const ExperimentConfig& config);

}  // namespace impmech::harness

#endif  // IMPMECH_TOOLS_HARNESS_CONFIG_H_

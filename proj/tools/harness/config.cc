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

#include "harness/config.h"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "impmech/status.h"

namespace impmech::harness {

namespace {

using nlohmann::json;

absl::Status Invalid(absl::string_view message) {
  return MakeError(ErrorKind::kConfigInvalid, message);
}

// Reads typed fields from one JSON object and rejects any key it was not
// asked about.
class Reader {
 public:
  Reader(const json& object, std::string path)
      : object_(object), path_(std::move(path)) {}

  absl::Status Open() const {
    if (!object_.is_object()) {
      return Invalid(absl::StrCat(path_, " must be an object"));
    }
    return absl::OkStatus();
  }

  bool Has(const std::string& key) {
    seen_.insert(key);
    return object_.contains(key);
  }

  absl::Status Int(const std::string& key, int& out, int lo = 0,
                   int hi = std::numeric_limits<int>::max()) {
    if (!Has(key)) return absl::OkStatus();
    const json& v = object_.at(key);
    if (!v.is_number_integer()) return Bad(key, "an integer");
    const std::int64_t x = v.get<std::int64_t>();
    if (x < lo || x > hi) {
      return Invalid(absl::StrCat(Where(key), " must lie in [", lo, ", ", hi,
                                  "]"));
    }
    out = static_cast<int>(x);
    return absl::OkStatus();
  }

  absl::Status U64(const std::string& key, std::uint64_t& out) {
    if (!Has(key)) return absl::OkStatus();
    const json& v = object_.at(key);
    if (v.is_number_unsigned()) {
      out = v.get<std::uint64_t>();
    } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      out = static_cast<std::uint64_t>(v.get<std::int64_t>());
    } else {
      return Bad(key, "a non-negative integer");
    }
    return absl::OkStatus();
  }

  absl::Status Double(const std::string& key, double& out) {
    if (!Has(key)) return absl::OkStatus();
    const json& v = object_.at(key);
    if (!v.is_number()) return Bad(key, "a number");
    out = v.get<double>();
    return absl::OkStatus();
  }

  absl::Status OptionalDouble(const std::string& key,
                              std::optional<double>& out) {
    if (!Has(key)) return absl::OkStatus();
    double x = 0.0;
    if (absl::Status s = Double(key, x); !s.ok()) return s;
    out = x;
    return absl::OkStatus();
  }

  absl::Status String(const std::string& key, std::string& out) {
    if (!Has(key)) return absl::OkStatus();
    const json& v = object_.at(key);
    if (!v.is_string()) return Bad(key, "a string");
    out = v.get<std::string>();
    return absl::OkStatus();
  }

  const json& At(const std::string& key) const { return object_.at(key); }
  std::string Where(const std::string& key) const {
    return path_.empty() ? key : absl::StrCat(path_, ".", key);
  }

  absl::Status Finish() const {
    std::vector<std::string> unknown;
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!seen_.count(it.key())) unknown.push_back(Where(it.key()));
    }
    if (!unknown.empty()) {
      return Invalid(
          absl::StrCat("unknown field(s): ", absl::StrJoin(unknown, ", ")));
    }
    return absl::OkStatus();
  }

 private:
  absl::Status Bad(const std::string& key, absl::string_view what) const {
    return Invalid(absl::StrCat(Where(key), " must be ", what));
  }

  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

#define RETURN_IF_ERROR_CFG(expr)          \
  do {                                     \
    if (absl::Status _s = (expr); !_s.ok()) \
      return _s;                           \
  } while (0)

absl::Status ParseFacility(const json& object, FacilityConfig& out) {
  Reader r(object, "facility");
  RETURN_IF_ERROR_CFG(r.Open());
  RETURN_IF_ERROR_CFG(r.Int("n", out.n, 1));
  RETURN_IF_ERROR_CFG(r.Int("m", out.m, 1, 64));
  RETURN_IF_ERROR_CFG(r.Int("k", out.k, 1, 8));
  RETURN_IF_ERROR_CFG(r.String("mechanism", out.mechanism));
  RETURN_IF_ERROR_CFG(r.OptionalDouble("rho", out.rho));
  RETURN_IF_ERROR_CFG(r.OptionalDouble("eps", out.eps));
  if (out.mechanism != "loc1" && out.mechanism != "loc2" &&
      out.mechanism != "loc3") {
    return Invalid("facility.mechanism must be loc1, loc2 or loc3");
  }
  if (out.eps && !(*out.eps > 0.0)) return Invalid("facility.eps must be > 0");
  return r.Finish();
}

absl::Status ParsePricing(const json& object, PricingConfig& out) {
  Reader r(object, "pricing");
  RETURN_IF_ERROR_CFG(r.Open());
  RETURN_IF_ERROR_CFG(r.Int("cohorts", out.cohorts, 1));
  RETURN_IF_ERROR_CFG(r.Int("cohort_size", out.cohort_size, 1, 16));
  RETURN_IF_ERROR_CFG(r.Int("grid_m", out.grid_m, 1, 1000));
  RETURN_IF_ERROR_CFG(r.OptionalDouble("eps", out.eps));
  if (r.Has("signal_counts")) {
    const json& v = r.At("signal_counts");
    if (!v.is_array()) return Invalid("pricing.signal_counts must be a list");
    for (const json& x : v) {
      if (!x.is_number_integer() || x.get<int>() < 1) {
        return Invalid("pricing.signal_counts entries must be integers >= 1");
      }
      out.signal_counts.push_back(x.get<int>());
    }
  }
  if (r.Has("valuation_table")) {
    const json& v = r.At("valuation_table");
    if (!v.is_array()) return Invalid("pricing.valuation_table must be a list");
    for (const json& row : v) {
      if (!row.is_array()) {
        return Invalid("pricing.valuation_table rows must be lists");
      }
      std::vector<double> values;
      for (const json& x : row) {
        if (!x.is_number()) {
          return Invalid("pricing.valuation_table entries must be numbers");
        }
        values.push_back(x.get<double>());
      }
      out.valuation_table.push_back(std::move(values));
    }
  }
  if (out.valuation_table.empty() != out.signal_counts.empty()) {
    return Invalid(
        "pricing.signal_counts and pricing.valuation_table go together");
  }
  if (out.eps && !(*out.eps > 0.0)) return Invalid("pricing.eps must be > 0");
  return r.Finish();
}

absl::Status ParseExample(const json& object, ExampleConfig& out) {
  Reader r(object, "example");
  RETURN_IF_ERROR_CFG(r.Open());
  RETURN_IF_ERROR_CFG(r.Int("n", out.n, 2, 64));
  RETURN_IF_ERROR_CFG(r.Double("mu", out.mu));
  RETURN_IF_ERROR_CFG(r.Double("eps", out.eps));
  RETURN_IF_ERROR_CFG(r.Int("revenue_n", out.revenue_n, 1));
  RETURN_IF_ERROR_CFG(r.OptionalDouble("impose_weight", out.impose_weight));
  if (!(out.mu > 0.0 && out.mu < 0.5)) {
    return Invalid("example.mu must lie in (0, 0.5)");
  }
  if (!(out.eps > 0.0)) return Invalid("example.eps must be > 0");
  if (out.impose_weight &&
      !(*out.impose_weight >= 0.0 && *out.impose_weight <= 1.0)) {
    return Invalid("example.impose_weight must lie in [0, 1]");
  }
  return r.Finish();
}

absl::Status ParseBudgets(const json& object, Budgets& out) {
  Reader r(object, "budgets");
  RETURN_IF_ERROR_CFG(r.Open());
  RETURN_IF_ERROR_CFG(r.U64("enumeration_cap", out.enumeration_cap));
  RETURN_IF_ERROR_CFG(r.Int("probes", out.probes, 0, 1'000'000));
  RETURN_IF_ERROR_CFG(r.Int("monte_carlo_draws", out.monte_carlo_draws, 0));
  return r.Finish();
}

std::optional<ExperimentKind> KindFromName(absl::string_view name) {
  for (ExperimentKind kind :
       {ExperimentKind::kVerify, ExperimentKind::kGapSweep,
        ExperimentKind::kExample1, ExperimentKind::kExample3,
        ExperimentKind::kPricing, ExperimentKind::kFacility}) {
    if (ExperimentKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

}  // namespace

absl::string_view ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kVerify:
      return "verify";
    case ExperimentKind::kGapSweep:
      return "gap_sweep";
    case ExperimentKind::kExample1:
      return "example1";
    case ExperimentKind::kExample3:
      return "example3";
    case ExperimentKind::kPricing:
      return "pricing";
    case ExperimentKind::kFacility:
      return "facility";
  }
  return "unknown";
}

ExperimentConfig DefaultConfig(ExperimentKind kind) {
  ExperimentConfig config;
  config.kind = kind;
  config.id = std::string(ExperimentKindName(kind));
  if (kind == ExperimentKind::kExample3) config.example.n = 8;
  if (kind == ExperimentKind::kPricing) config.application = "pricing";
  if (kind == ExperimentKind::kGapSweep) config.n_grid = SweepGrid{};
  return config;
}

absl::StatusOr<ExperimentConfig> ParseConfig(const json& document) {
  Reader r(document, "");
  RETURN_IF_ERROR_CFG(r.Open());
  std::string kind_name;
  RETURN_IF_ERROR_CFG(r.String("experiment", kind_name));
  if (kind_name.empty()) return Invalid("missing field: experiment");
  const std::optional<ExperimentKind> kind = KindFromName(kind_name);
  if (!kind) {
    return Invalid(absl::StrCat("unknown experiment kind '", kind_name, "'"));
  }
  ExperimentConfig config = DefaultConfig(*kind);
  RETURN_IF_ERROR_CFG(r.String("id", config.id));
  RETURN_IF_ERROR_CFG(r.U64("seed", config.seed));
  RETURN_IF_ERROR_CFG(r.String("application", config.application));
  RETURN_IF_ERROR_CFG(r.String("output", config.output));
  if (config.application != "facility" && config.application != "pricing") {
    return Invalid("application must be facility or pricing");
  }
  if (r.Has("facility")) {
    RETURN_IF_ERROR_CFG(ParseFacility(r.At("facility"), config.facility));
  }
  if (r.Has("pricing")) {
    RETURN_IF_ERROR_CFG(ParsePricing(r.At("pricing"), config.pricing));
  }
  if (r.Has("example")) {
    RETURN_IF_ERROR_CFG(ParseExample(r.At("example"), config.example));
  }
  if (r.Has("budgets")) {
    RETURN_IF_ERROR_CFG(ParseBudgets(r.At("budgets"), config.budgets));
  }
  if (r.Has("n_values")) {
    const json& v = r.At("n_values");
    if (!v.is_array()) return Invalid("n_values must be a list");
    for (const json& x : v) {
      if (!x.is_number_integer() || x.get<std::int64_t>() < 1) {
        return Invalid("n_values entries must be positive integers");
      }
      config.n_values.push_back(x.get<std::int64_t>());
    }
    if (config.n_values.empty()) return Invalid("n_values is empty");
  }
  if (r.Has("n_grid")) {
    Reader g(r.At("n_grid"), "n_grid");
    RETURN_IF_ERROR_CFG(g.Open());
    SweepGrid grid;
    RETURN_IF_ERROR_CFG(g.Int("decades", grid.decades, 1, 6));
    RETURN_IF_ERROR_CFG(g.Int("points_per_decade", grid.points_per_decade, 1,
                              20));
    RETURN_IF_ERROR_CFG(g.Finish());
    config.n_grid = grid;
  }
  if (config.kind == ExperimentKind::kGapSweep && config.n_values.empty() &&
      !config.n_grid) {
    return Invalid("gap_sweep needs n_values or n_grid");
  }
  if (config.id.empty()) return Invalid("id must be non-empty");
  RETURN_IF_ERROR_CFG(r.Finish());
  return config;
}

absl::StatusOr<ExperimentConfig> ParseConfigText(absl::string_view text) {
  json document = json::parse(text.begin(), text.end(), nullptr,
                              /*allow_exceptions=*/false);
  if (document.is_discarded()) return Invalid("config is not valid JSON");
  return ParseConfig(document);
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return Invalid(absl::StrCat("cannot read config ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str());
}

json ConfigToJson(const ExperimentConfig& config) {
  json out;
  out["experiment"] = std::string(ExperimentKindName(config.kind));
  out["id"] = config.id;
  out["seed"] = config.seed;
  out["application"] = config.application;
  json facility = {{"n", config.facility.n},
                   {"m", config.facility.m},
                   {"k", config.facility.k},
                   {"mechanism", config.facility.mechanism}};
  if (config.facility.rho) facility["rho"] = *config.facility.rho;
  if (config.facility.eps) facility["eps"] = *config.facility.eps;
  out["facility"] = facility;
  json pricing = {{"cohorts", config.pricing.cohorts},
                  {"cohort_size", config.pricing.cohort_size},
                  {"grid_m", config.pricing.grid_m}};
  if (!config.pricing.signal_counts.empty()) {
    pricing["signal_counts"] = config.pricing.signal_counts;
    pricing["valuation_table"] = config.pricing.valuation_table;
  }
  if (config.pricing.eps) pricing["eps"] = *config.pricing.eps;
  out["pricing"] = pricing;
  json example = {{"n", config.example.n},
                  {"mu", config.example.mu},
                  {"eps", config.example.eps},
                  {"revenue_n", config.example.revenue_n}};
  if (config.example.impose_weight) {
    example["impose_weight"] = *config.example.impose_weight;
  }
  out["example"] = example;
  if (!config.n_values.empty()) out["n_values"] = config.n_values;
  if (config.n_grid) {
    out["n_grid"] = {{"decades", config.n_grid->decades},
                     {"points_per_decade", config.n_grid->points_per_decade}};
  }
  out["budgets"] = {{"enumeration_cap", config.budgets.enumeration_cap},
                    {"probes", config.budgets.probes},
                    {"monte_carlo_draws", config.budgets.monte_carlo_draws}};
  if (!config.output.empty()) out["output"] = config.output;
  return out;
}

}  // namespace impmech::harness

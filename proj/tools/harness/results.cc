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

#include "harness/results.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace impmech::harness {

namespace {

std::string Cell(const std::optional<double>& v) {
  if (!v) return "";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  if (std::isnan(*v)) return "nan";
  return absl::StrFormat("%.17g", *v);
}

template <typename Int>
std::string Cell(const std::optional<Int>& v) {
  return v ? absl::StrCat(*v) : "";
}

// Quotes a text cell when it carries CSV metacharacters.
std::string Text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

nlohmann::json Number(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (!std::isfinite(*v)) return Cell(v);
  return *v;
}

}  // namespace

bool ExperimentResult::AllPass() const {
  for (const ResultRow& row : rows) {
    if (!row.pass) return false;
  }
  return true;
}

std::string FormatCsv(const std::vector<ResultRow>& rows, bool timing) {
  std::string out = absl::StrJoin(kCsvColumns, ",");
  out += "\n";
  for (const ResultRow& r : rows) {
    const std::vector<std::string> cells = {
        Text(r.experiment_id),
        Cell(r.n),
        Cell(r.eps),
        Cell(r.q),
        Cell(r.n0),
        Cell(r.p_tilde),
        Cell(r.gamma),
        Cell(r.d),
        Cell(r.s_count),
        Cell(r.beta_bound),
        Cell(r.beta_measured),
        Text(r.property),
        r.pass ? "true" : "false",
        Cell(r.margin),
        timing ? absl::StrFormat("%.6f", r.wall_clock_s) : "",
        absl::StrCat(r.seed)};
    out += absl::StrJoin(cells, ",");
    out += "\n";
  }
  return out;
}

nlohmann::json FormatSidecar(const ExperimentResult& result,
                             const nlohmann::json& config) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ResultRow& r : result.rows) {
    nlohmann::json row = {
        {"experiment_id", r.experiment_id},
        {"n", r.n ? nlohmann::json(*r.n) : nlohmann::json(nullptr)},
        {"eps", Number(r.eps)},
        {"q", Number(r.q)},
        {"n0", r.n0 ? nlohmann::json(*r.n0) : nlohmann::json(nullptr)},
        {"p_tilde", Number(r.p_tilde)},
        {"gamma", Number(r.gamma)},
        {"d", Number(r.d)},
        {"s_count",
         r.s_count ? nlohmann::json(*r.s_count) : nlohmann::json(nullptr)},
        {"beta_bound", Number(r.beta_bound)},
        {"beta_measured", Number(r.beta_measured)},
        {"property", r.property},
        {"pass", r.pass},
        {"margin", Number(r.margin)},
        {"wall_clock_s", r.wall_clock_s},
        {"seed", r.seed},
        {"detail", r.detail}};
    rows.push_back(std::move(row));
  }
  return {{"config", config},
          {"all_pass", result.AllPass()},
          {"summary", result.summary},
          {"rows", rows}};
}

absl::Status WriteAtomically(const std::string& path,
                             const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(target.parent_path(), ec);
  }
  const std::string temp = absl::StrCat(path, ".tmp.", ::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", temp));
    out << content;
    out.flush();
    if (!out) {
      std::remove(temp.c_str());
      return absl::UnavailableError(absl::StrCat("short write to ", temp));
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::remove(temp.c_str());
    return absl::UnavailableError(
        absl::StrCat("cannot rename onto ", path, ": ", ec.message()));
  }
  return absl::OkStatus();
}

}  // namespace impmech::harness

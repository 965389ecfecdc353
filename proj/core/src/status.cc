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

#include "impmech/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace impmech {
namespace {

constexpr absl::string_view kPayloadUrl = "type.impmech/error-kind";

struct KindInfo {
  ErrorKind kind;
  absl::string_view name;
  absl::StatusCode code;
};

constexpr std::array<KindInfo, 9> kKinds = {{
    {ErrorKind::kEnumerationBudgetExceeded, "EnumerationBudgetExceeded",
     absl::StatusCode::kResourceExhausted},
    {ErrorKind::kNotNonTrivial, "NotNonTrivial",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kZeroProbabilityAsymmetry, "ZeroProbabilityAsymmetry",
     absl::StatusCode::kOutOfRange},
    {ErrorKind::kPopulationTooSmall, "PopulationTooSmall",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kParamContractViolated, "ParamContractViolated",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kWrongValuesKind, "WrongValuesKind",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kGridTooCoarse, "GridTooCoarse",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kResolutionBudgetExceeded, "ResolutionBudgetExceeded",
     absl::StatusCode::kResourceExhausted},
    {ErrorKind::kConfigInvalid, "ConfigInvalid",
     absl::StatusCode::kInvalidArgument},
}};

const KindInfo& Info(ErrorKind kind) {
  for (const KindInfo& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds[0];
}

}  // namespace

absl::string_view ErrorKindName(ErrorKind kind) { return Info(kind).name; }

absl::Status MakeError(ErrorKind kind, absl::string_view message) {
  const KindInfo& info = Info(kind);
  absl::Status status(info.code, absl::StrCat(info.name, ": ", message));
  status.SetPayload(kPayloadUrl, absl::Cord(info.name));
  return status;
}

std::optional<ErrorKind> ErrorKindOf(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const KindInfo& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

}  // namespace impmech

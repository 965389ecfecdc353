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

#ifndef IMPMECH_STATUS_H_
#define IMPMECH_STATUS_H_

#include <optional>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace impmech {

// Named failure modes. Each maps onto a canonical absl code and is attached
// to the status as a payload so callers can distinguish, e.g., a budget
// overrun from a precondition failure that shares the same code.
enum class ErrorKind {
  kEnumerationBudgetExceeded,
  kNotNonTrivial,
  kZeroProbabilityAsymmetry,
  kPopulationTooSmall,
  kParamContractViolated,
  kWrongValuesKind,
  kGridTooCoarse,
  kResolutionBudgetExceeded,
  kConfigInvalid,
};

absl::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, absl::string_view message);

// Returns the kind attached by MakeError, or nullopt for foreign statuses.
std::optional<ErrorKind> ErrorKindOf(const absl::Status& status);

inline bool HasErrorKind(const absl::Status& status, ErrorKind kind) {
  return ErrorKindOf(status) == kind;
}

}  // namespace impmech

#endif  // IMPMECH_STATUS_H_

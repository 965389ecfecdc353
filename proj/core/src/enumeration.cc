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

#include "impmech/enumeration.h"

#include <algorithm>
#include <limits>
#include <thread>

#include "absl/strings/str_cat.h"
#include "impmech/status.h"

namespace impmech {

absl::Status CheckBudget(std::uint64_t tuples, const EnumerationBudget& budget,
                         absl::string_view what) {
  if (tuples > budget.max_tuples) {
    return MakeError(ErrorKind::kEnumerationBudgetExceeded,
                     absl::StrCat(what, " needs ", tuples,
                                  " evaluated tuples, cap is ",
                                  budget.max_tuples));
  }
  return absl::OkStatus();
}

std::uint64_t SaturatingMul(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  if (a != 0 && b > kMax / a) return kMax;
  return a * b;
}

ProfileSpace::ProfileSpace(std::vector<int> radices)
    : radices_(std::move(radices)) {
  strides_.reserve(radices_.size());
  for (int r : radices_) {
    strides_.push_back(size_);
    const std::uint64_t next = SaturatingMul(size_, static_cast<std::uint64_t>(r));
    if (next == std::numeric_limits<std::uint64_t>::max()) indexable_ = false;
    size_ = next;
  }
}

void ProfileSpace::Decode(std::uint64_t index, std::span<int> out) const {
  for (std::size_t k = 0; k < radices_.size(); ++k) {
    out[k] = static_cast<int>(index % static_cast<std::uint64_t>(radices_[k]));
    index /= static_cast<std::uint64_t>(radices_[k]);
  }
}

std::vector<int> ProfileSpace::Decode(std::uint64_t index) const {
  std::vector<int> out(radices_.size());
  Decode(index, out);
  return out;
}

std::uint64_t ProfileSpace::Encode(std::span<const int> profile) const {
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < radices_.size(); ++k) {
    index += strides_[k] * static_cast<std::uint64_t>(profile[k]);
  }
  return index;
}

std::uint64_t ProfileSpace::Replace(std::uint64_t index, int coordinate,
                                    int value) const {
  const std::uint64_t stride = strides_[coordinate];
  const std::uint64_t digit =
      (index / stride) % static_cast<std::uint64_t>(radices_[coordinate]);
  return index - digit * stride + static_cast<std::uint64_t>(value) * stride;
}

ProfileSpace ProfileSpace::Without(int coordinate) const {
  std::vector<int> rest;
  rest.reserve(radices_.size());
  for (int k = 0; k < dimension(); ++k) {
    if (k != coordinate) rest.push_back(radices_[k]);
  }
  return ProfileSpace(std::move(rest));
}

bool NextProfile(std::span<int> profile, std::span<const int> radices) {
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (++profile[k] < radices[k]) return true;
    profile[k] = 0;
  }
  return false;
}

void ParallelFor(std::uint64_t count, int jobs,
                 const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  if (count == 0) return;
  const std::uint64_t workers =
      std::min<std::uint64_t>(std::max(jobs, 1), count);
  if (workers == 1) {
    fn(0, count);
    return;
  }
  const std::uint64_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace impmech

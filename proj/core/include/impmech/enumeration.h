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

#ifndef IMPMECH_ENUMERATION_H_
#define IMPMECH_ENUMERATION_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace impmech {

// Cap on evaluated tuples for exhaustive checks. Exceeding it is a hard
// error (kEnumerationBudgetExceeded), never a silent truncation.
struct EnumerationBudget {
  std::uint64_t max_tuples = 10'000'000;
};

// Returns kEnumerationBudgetExceeded when `tuples` exceeds the cap.
absl::Status CheckBudget(std::uint64_t tuples, const EnumerationBudget& budget,
                         absl::string_view what);

// Multiplication that saturates at UINT64_MAX instead of wrapping.
std::uint64_t SaturatingMul(std::uint64_t a, std::uint64_t b);

// Mixed-radix indexing of the product of per-agent finite sets. Coordinate 0
// is the least significant digit, so index 1 is (1, 0, 0, ...).
class ProfileSpace {
 public:
  explicit ProfileSpace(std::vector<int> radices);

  int dimension() const { return static_cast<int>(radices_.size()); }
  int radix(int coordinate) const { return radices_[coordinate]; }
  std::span<const int> radices() const { return radices_; }

  // Saturates at UINT64_MAX for spaces too large to index.
  std::uint64_t size() const { return size_; }
  bool indexable() const { return indexable_; }

  void Decode(std::uint64_t index, std::span<int> out) const;
  std::vector<int> Decode(std::uint64_t index) const;
  std::uint64_t Encode(std::span<const int> profile) const;

  // Index of `index` with one coordinate replaced by `value`.
  std::uint64_t Replace(std::uint64_t index, int coordinate, int value) const;

  // Space with one coordinate removed (opponent profiles of an agent).
  ProfileSpace Without(int coordinate) const;

 private:
  std::vector<int> radices_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t size_ = 1;
  bool indexable_ = true;
};

// Advances `profile` to the next element in mixed-radix order. Returns false
// after the last element (profile wraps to all zeros).
bool NextProfile(std::span<int> profile, std::span<const int> radices);

// Runs fn(begin, end) over `jobs` contiguous chunks of [0, count). Chunks are
// a pure function of (count, jobs), so callers that merge per-chunk results in
// chunk order get results independent of scheduling.
void ParallelFor(std::uint64_t count, int jobs,
                 const std::function<void(std::uint64_t, std::uint64_t)>& fn);

// Runs `fn(begin, end)` on contiguous chunks and returns the per-chunk results
// in index order, so merges do not depend on scheduling.
template <typename Result, typename Fn>
std::vector<Result> ParallelChunks(std::uint64_t count, int jobs, Fn fn) {
  const std::uint64_t workers =
      count == 0 ? 0 : std::min<std::uint64_t>(jobs < 1 ? 1 : jobs, count);
  std::vector<Result> results(workers);
  if (workers == 0) return results;
  const std::uint64_t chunk = (count + workers - 1) / workers;
  ParallelFor(workers, static_cast<int>(workers),
              [&](std::uint64_t first, std::uint64_t last) {
                for (std::uint64_t w = first; w < last; ++w) {
                  const std::uint64_t begin = w * chunk;
                  const std::uint64_t end = std::min(count, begin + chunk);
                  if (begin < end) results[w] = fn(begin, end);
                }
              });
  return results;
}

}  // namespace impmech

#endif  // IMPMECH_ENUMERATION_H_

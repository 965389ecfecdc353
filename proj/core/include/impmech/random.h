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

#ifndef IMPMECH_RANDOM_H_
#define IMPMECH_RANDOM_H_

#include <cstdint>
#include <random>

#include "absl/strings/string_view.h"

namespace impmech {

// Seedable, splittable pseudo-random stream. A stream has a single owner;
// parallel tasks derive independent children with Split() so that results do
// not depend on how tasks are scheduled. Draws are bit-reproducible across
// platforms (no std::*_distribution on the hot path).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Child stream keyed by (this seed, name, index).
  RandomStream Split(absl::string_view name, std::uint64_t index) const;

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();
  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, bound), bound > 0 (rejection sampling, unbiased).
  std::uint64_t UniformInt(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer: a bijective 64-bit mixer.
std::uint64_t Mix64(std::uint64_t x);

// FNV-1a over the bytes of `text`.
std::uint64_t HashName(absl::string_view text);

}  // namespace impmech

#endif  // IMPMECH_RANDOM_H_

// Copyright 2026 The cscl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSCL_RNG_H_
#define CSCL_RNG_H_

#include <cstdint>
#include <span>
#include <utility>

namespace cscl {

// All randomness in the toolkit goes through this generator so that outputs
// are identical across platforms and standard libraries.
//
// Algorithm, fixed:
//   splitmix64(x): x += 0x9E3779B97F4A7C15;
//                  z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9;
//                  z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//                  return z ^ (z >> 31)
//   Seeding with (seed, stream): a splitmix64 state is initialised to
//   seed ^ splitmix64(stream) and its next four outputs become the
//   xoshiro256** state words s0..s3.
//   Next(): xoshiro256** (Blackman & Vigna, 2018).
//   Uniform(bound): rejection sampling, discard r < (2^64 - bound) % bound,
//   return r % bound.
//   UniformDouble(): (Next() >> 11) * 2^-53, in [0, 1).
//   Shuffle: Fisher-Yates, i from size-1 down to 1, swap(i, Uniform(i + 1)).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t Next();
  std::uint64_t Uniform(std::uint64_t bound);
  double UniformDouble();

  template <typename T>
  void Shuffle(std::span<T> items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(Uniform(i + 1));
      using std::swap;
      swap(items[i], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

std::uint64_t SplitMix64(std::uint64_t* state);

}  // namespace cscl

#endif  // CSCL_RNG_H_

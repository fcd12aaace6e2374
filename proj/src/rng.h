// Copyright 2026 The polyvul Authors.
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

#ifndef POLYVUL_RNG_H_
#define POLYVUL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace polyvul {

// Seeded generator with a platform-independent output stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are implementation-defined, so
// doubles and bounded integers are derived here from the raw 64-bit words.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n) by rejection sampling.
  uint64_t Below(uint64_t n);

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t x);

// Order-sensitive combination of 64-bit words, used to derive per-run seeds:
// h = Mix64(h ^ (word + golden)) folded over the inputs, starting from a
// fixed constant.
uint64_t Hash64(std::initializer_list<uint64_t> words);

}  // namespace polyvul

#endif  // POLYVUL_RNG_H_

// Copyright 2026 The udfsel Authors.
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

// Seeded random streams. Trials draw their seeds from a master seed through a
// counter-based split, so every trial is reproducible on its own.

#ifndef UDFSEL_RANDOM_H_
#define UDFSEL_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace udfsel {

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of the `index`-th independent stream under `master`.
inline uint64_t StreamSeed(uint64_t master, uint64_t index) {
  return SplitMix64(master ^ SplitMix64(index + 1));
}

// Engine plus the few draws the library needs, implemented directly so the
// streams do not depend on the standard library's distribution algorithms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Uniform on [0, n) without modulo bias.
  uint64_t Below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Moves a uniformly random selection of `k` items of v[from..] into
  // v[from..from+k) (partial Fisher-Yates).
  template <typename T>
  void ShuffleInto(std::vector<T>* v, size_t from, size_t k) {
    for (size_t i = from; i < from + k && i < v->size(); ++i) {
      const size_t j = i + Below(v->size() - i);
      std::swap((*v)[i], (*v)[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace udfsel

#endif  // UDFSEL_RANDOM_H_

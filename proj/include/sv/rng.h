// Copyright 2026 The svkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SV_RNG_H_
#define SV_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sv/common.h"

namespace sv {

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic RNG. All derived values are computed with explicit
// arithmetic on raw engine output, so a fixed seed reproduces the exact
// same stream on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n).
  int UniformInt(int n) {
    if (n <= 0) throw ContractError("Rng::UniformInt: n must be positive");
    // Rejection sampling keeps the distribution exactly uniform.
    uint64_t bound = ~0ULL - (~0ULL % static_cast<uint64_t>(n));
    uint64_t x;
    do {
      x = engine_();
    } while (x >= bound);
    return static_cast<int>(x % static_cast<uint64_t>(n));
  }

  // Standard normal via Box-Muller; caches the second value.
  double Gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1, u2;
    do {
      u1 = Uniform();
    } while (u1 <= 0.0);
    u2 = Uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  template <typename T>
  void Shuffle(std::vector<T>* v) {
    for (int i = static_cast<int>(v->size()) - 1; i > 0; --i) {
      int j = UniformInt(i + 1);
      std::swap((*v)[i], (*v)[j]);
    }
  }

  // k distinct indices from [0, n), in selection order.
  std::vector<int> SampleWithoutReplacement(int n, int k) {
    if (k > n) throw ContractError("Rng: sample size exceeds population");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
      int j = UniformInt(n - i);
      out.push_back(pool[j]);
      std::swap(pool[j], pool[n - 1 - i]);
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace sv

#endif  // SV_RNG_H_

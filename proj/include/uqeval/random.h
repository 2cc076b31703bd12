/*
 * Copyright 2026 The uqeval Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Seeded random source with platform-independent output.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard <random> distributions are implementation-defined,
// so every distribution used by the library is derived here from raw 64-bit
// draws:
//   Uniform()        (x >> 11) * 2^-53, in [0, 1)
//   UniformInt(n)    rejection sampling on x mod n, unbiased
//   Normal()         Box-Muller, cosine branch only
//   Gamma(a)         Marsaglia-Tsang, with the a < 1 boost u^(1/a)
//   Beta(a, b)       X / (X + Y), X ~ Gamma(a), Y ~ Gamma(b)
//   Shuffle          Fisher-Yates from the back

#ifndef UQEVAL_RANDOM_H_
#define UQEVAL_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace uqeval {

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double low, double high) {
    return low + (high - low) * Uniform();
  }

  uint64_t UniformInt(uint64_t n) {
    const uint64_t limit = -n % n;  // 2^64 mod n
    uint64_t x = engine_();
    while (x < limit) x = engine_();
    return x % n;
  }

  double Normal() {
    const double u1 = 1.0 - Uniform();  // (0, 1]
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  double Gamma(double shape) {
    if (shape < 1.0) {
      const double u = 1.0 - Uniform();
      return Gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
      double x = 0.0;
      double v = 0.0;
      do {
        x = Normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = 1.0 - Uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
        return d * v;
      }
    }
  }

  double Beta(double alpha, double beta) {
    const double x = Gamma(alpha);
    const double y = Gamma(beta);
    return x / (x + y);
  }

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(UniformInt(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace uqeval

#endif  // UQEVAL_RANDOM_H_

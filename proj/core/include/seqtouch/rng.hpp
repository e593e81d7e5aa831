// Copyright 2026 The seqtouch Authors
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

#ifndef SEQTOUCH_RNG_HPP_
#define SEQTOUCH_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

namespace seqtouch {

// splitmix64: tiny counter-style generator. Every random draw in the project
// goes through this so results are bit-reproducible across platforms (the
// standard library distributions are implementation-defined and are avoided).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {
    // Warm up so trivially related seeds diverge immediately.
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (both draws consumed; no cached spare, so
  // the stream position is a pure function of the call count).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo is biased for huge n; all project uses are tiny.
    return next_u64() % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  Rng split(std::uint64_t stream) { return Rng(derive_seed(next_u64(), stream)); }

 private:
  std::uint64_t state_;
};

}  // namespace seqtouch

#endif  // SEQTOUCH_RNG_HPP_

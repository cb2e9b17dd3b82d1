// interp/random.h

// Copyright 2026 The interp Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef INTERP_RANDOM_H_
#define INTERP_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace interp {

/// Platform-independent random source. std::mt19937_64 has a fully specified
/// output sequence, but the standard distributions do not, so the conversions
/// to uniform, integer and Gaussian variates are done here.
class Rng {
 public:
  /// Name recorded in configs so that a draw can be reproduced elsewhere.
  static constexpr std::string_view kAlgorithm = "mt19937_64+box-muller";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), rejection sampled.
  std::uint64_t UniformInt(std::uint64_t n);

  /// Standard normal via the Box-Muller transform; the second value of each
  /// pair is cached.
  double Normal();

  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Fisher-Yates shuffle driven by Rng, so the permutation is identical on
/// every standard library.
template <typename Container>
void Shuffle(Container& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.UniformInt(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace interp

#endif  // INTERP_RANDOM_H_

// Copyright 2026 The swapqkd Authors.
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

#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace swapqkd {

using Amplitude = std::complex<double>;
using StateVector = std::vector<Amplitude>;

/// Normalization and probability-sum tolerance.
inline constexpr double kNormTolerance = 1e-9;
/// Outcomes below this probability are never sampled.
inline constexpr double kZeroProbability = 1e-12;

/// The four Bell states. The underlying value is the 2-bit key symbol.
enum class BellIndex : std::uint8_t {
  PhiPlus = 0,
  PhiMinus = 1,
  PsiPlus = 2,
  PsiMinus = 3,
};

inline constexpr std::array<BellIndex, 4> kAllBellIndices = {
    BellIndex::PhiPlus, BellIndex::PhiMinus, BellIndex::PsiPlus,
    BellIndex::PsiMinus};

constexpr std::uint8_t code_of(BellIndex b) noexcept {
  return static_cast<std::uint8_t>(b);
}

/// Inverse of code_of; only the low two bits are used.
constexpr BellIndex bell_from_code(unsigned code) noexcept {
  return static_cast<BellIndex>(code & 0x3u);
}

std::string_view to_string(BellIndex b) noexcept;

/// Amplitudes of a Bell state over |00>, |01>, |10>, |11>.
const std::array<double, 4>& bell_vector(BellIndex b) noexcept;

using BellDistribution = std::array<double, 4>;

enum class Owner : std::uint8_t { Alice, Bob, Eve };

std::string_view to_string(Owner o) noexcept;

struct ParticleId {
  std::uint32_t sequence = 0;
  Owner owner = Owner::Alice;

  friend auto operator<=>(const ParticleId&, const ParticleId&) = default;
};

/// Seeded generator. Same seed, same draws.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

/// Independent sub-seed for stream `stream` of a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

}  // namespace swapqkd

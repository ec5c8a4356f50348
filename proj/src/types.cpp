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

#include <cmath>
#include <limits>

#include "swapqkd/errors.hpp"
#include "swapqkd/types.hpp"

namespace swapqkd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParticleSet: return "InvalidParticleSet";
    case ErrorCode::ParticleNotFound: return "ParticleNotFound";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::InsufficientKeyMaterial: return "InsufficientKeyMaterial";
    case ErrorCode::KeyReuseViolation: return "KeyReuseViolation";
    case ErrorCode::EmptyKey: return "EmptyKey";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

std::string_view to_string(BellIndex b) noexcept {
  switch (b) {
    case BellIndex::PhiPlus: return "PhiPlus";
    case BellIndex::PhiMinus: return "PhiMinus";
    case BellIndex::PsiPlus: return "PsiPlus";
    case BellIndex::PsiMinus: return "PsiMinus";
  }
  return "?";
}

const std::array<double, 4>& bell_vector(BellIndex b) noexcept {
  static const double h = 1.0 / std::sqrt(2.0);
  static const std::array<std::array<double, 4>, 4> table = {{
      {h, 0.0, 0.0, h},
      {h, 0.0, 0.0, -h},
      {0.0, h, h, 0.0},
      {0.0, h, -h, 0.0},
  }};
  return table[code_of(b)];
}

std::string_view to_string(Owner o) noexcept {
  switch (o) {
    case Owner::Alice: return "alice";
    case Owner::Bob: return "bob";
    case Owner::Eve: return "eve";
  }
  return "?";
}

std::size_t Rng::below(std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace swapqkd

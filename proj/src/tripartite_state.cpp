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

#include "swapqkd/tripartite_state.hpp"

#include <cmath>
#include <string>

#include "swapqkd/errors.hpp"

namespace swapqkd {

namespace {

double norm_of(const StateVector& v) {
  double sum = 0.0;
  for (const auto& a : v) sum += std::norm(a);
  return std::sqrt(sum);
}

}  // namespace

TripartiteState::TripartiteState(StateVector amplitudes,
                                 std::size_t ancilla_dim)
    : amplitudes_(std::move(amplitudes)), ancilla_dim_(ancilla_dim) {
  if (ancilla_dim_ < 1 || ancilla_dim_ > kMaxAncillaDim) {
    fail(ErrorCode::InvalidState,
         "ancilla dimension must be in 1..4, got " + std::to_string(ancilla_dim_));
  }
  if (amplitudes_.size() != 4 * ancilla_dim_) {
    fail(ErrorCode::InvalidState,
         "expected " + std::to_string(4 * ancilla_dim_) + " amplitudes, got " +
             std::to_string(amplitudes_.size()));
  }
  const double n = norm_of(amplitudes_);
  if (std::abs(n - 1.0) > kNormTolerance) {
    fail(ErrorCode::InvalidState,
         "tripartite state is not normalized (norm " + std::to_string(n) + ")");
  }
}

TripartiteState TripartiteState::normalized(StateVector amplitudes,
                                            std::size_t ancilla_dim) {
  const double n = norm_of(amplitudes);
  if (n == 0.0) fail(ErrorCode::InvalidState, "zero vector");
  for (auto& a : amplitudes) a /= n;
  return TripartiteState(std::move(amplitudes), ancilla_dim);
}

TripartiteState TripartiteState::bell_product(
    BellIndex bell, std::span<const Amplitude> ancilla) {
  const auto& b = bell_vector(bell);
  StateVector amps(4 * ancilla.size());
  for (std::size_t ab = 0; ab < 4; ++ab) {
    for (std::size_t e = 0; e < ancilla.size(); ++e) {
      amps[ab * ancilla.size() + e] = b[ab] * ancilla[e];
    }
  }
  return normalized(std::move(amps), ancilla.size());
}

}  // namespace swapqkd

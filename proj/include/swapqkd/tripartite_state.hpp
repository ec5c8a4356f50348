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

#include <cstddef>
#include <span>

#include "swapqkd/types.hpp"

namespace swapqkd {

/// Per-pair state |phi>_ABE: amplitudes over A (x) B (x) ancilla, row-major,
/// index = (2a + b) * ancilla_dim + e. The ancilla dimension is 1..4.
class TripartiteState {
 public:
  static constexpr std::size_t kMaxAncillaDim = 4;

  /// Throws InvalidState on a size mismatch, an out-of-range ancilla
  /// dimension or a norm differing from 1 by more than kNormTolerance.
  TripartiteState(StateVector amplitudes, std::size_t ancilla_dim);

  /// Scales `amplitudes` to unit norm before validating.
  static TripartiteState normalized(StateVector amplitudes,
                                    std::size_t ancilla_dim);

  /// |bell>_AB (x) |ancilla>_E, the ancilla vector is normalized.
  static TripartiteState bell_product(BellIndex bell,
                                      std::span<const Amplitude> ancilla);

  const StateVector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t ancilla_dim() const noexcept { return ancilla_dim_; }

  /// Coefficient of |ab>_AB |e>_E with ab in 0..3.
  Amplitude at(std::size_t ab, std::size_t e) const {
    return amplitudes_[ab * ancilla_dim_ + e];
  }

 private:
  StateVector amplitudes_;
  std::size_t ancilla_dim_;
};

}  // namespace swapqkd

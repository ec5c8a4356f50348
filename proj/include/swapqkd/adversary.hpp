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

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "swapqkd/quantum_core.hpp"
#include "swapqkd/tripartite_state.hpp"

namespace swapqkd {

struct NoAttack {};
/// Eve captures every transiting particle and forwards half of her own |Phi+>.
struct InterceptResend {};
/// Eve couples the same ancilla state to every pair.
struct EntangleAncilla {
  TripartiteState phi;
};

using AttackStrategy = std::variant<NoAttack, InterceptResend, EntangleAncilla>;

std::string_view attack_name(const AttackStrategy& attack) noexcept;

/// Particles on their way from Alice to Bob.
struct QuantumChannel {
  std::vector<ParticleId> in_transit;
};

/// What Eve keeps after an intercept-resend pass, keyed by sequence number.
struct InterceptRecords {
  std::uint32_t retained_offset = 0;
  /// Intercepted sequence numbers, ascending.
  std::vector<std::uint32_t> sequences;

  bool covers(std::uint32_t sequence) const noexcept;
  /// Alice's original partner, now held by Eve.
  static ParticleId captured(std::uint32_t sequence) noexcept {
    return {sequence, Owner::Eve};
  }
  /// Eve's half of the counterfeit pair whose partner went to Bob.
  ParticleId retained(std::uint32_t sequence) const noexcept {
    return {retained_offset + sequence, Owner::Eve};
  }
};

/// Sequence numbers of pairs that carry one of Eve's ancillas.
struct AncillaRefs {
  std::vector<std::uint32_t> sequences;
};

/// Eve's own particles are numbered from `eve_sequence_offset` upward so they
/// never collide with the legitimate ones.
InterceptRecords apply_intercept_resend(QuantumRegister& reg,
                                        QuantumChannel& channel,
                                        std::uint32_t eve_sequence_offset);

AncillaRefs apply_entangle_ancilla(QuantumRegister& reg,
                                   const QuantumChannel& channel,
                                   const TripartiteState& phi);

// Applies one strategy to the channel and keeps whatever Eve learns.
class Eavesdropper {
 public:
  Eavesdropper(AttackStrategy strategy, std::uint32_t eve_sequence_offset)
      : strategy_(std::move(strategy)), offset_(eve_sequence_offset) {}

  void on_transit(QuantumRegister& reg, QuantumChannel& channel);

  const AttackStrategy& strategy() const noexcept { return strategy_; }
  const InterceptRecords& intercepts() const noexcept { return intercepts_; }
  const AncillaRefs& ancillas() const noexcept { return ancillas_; }

  /// Eve's guess of Bob's result on (first, second): she measures her
  /// retained halves of the same two counterfeit pairs. InterceptResend only.
  BellIndex infer_bob_result(QuantumRegister& reg, std::uint32_t first,
                             std::uint32_t second, Rng& rng) const;

 private:
  AttackStrategy strategy_;
  std::uint32_t offset_;
  InterceptRecords intercepts_;
  AncillaRefs ancillas_;
};

}  // namespace swapqkd

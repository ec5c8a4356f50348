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

#include "swapqkd/adversary.hpp"

#include <algorithm>

#include "swapqkd/errors.hpp"

namespace swapqkd {

bool InterceptRecords::covers(std::uint32_t sequence) const noexcept {
  return std::binary_search(sequences.begin(), sequences.end(), sequence);
}

std::string_view attack_name(const AttackStrategy& attack) noexcept {
  struct Visitor {
    std::string_view operator()(const NoAttack&) const { return "none"; }
    std::string_view operator()(const InterceptResend&) const {
      return "intercept_resend";
    }
    std::string_view operator()(const EntangleAncilla&) const {
      return "entangle_ancilla";
    }
  };
  return std::visit(Visitor{}, attack);
}

InterceptRecords apply_intercept_resend(QuantumRegister& reg,
                                        QuantumChannel& channel,
                                        std::uint32_t eve_sequence_offset) {
  InterceptRecords records;
  records.retained_offset = eve_sequence_offset;
  for (const ParticleId& in_flight : channel.in_transit) {
    const std::uint32_t seq = in_flight.sequence;
    reg.relabel(in_flight, InterceptRecords::captured(seq));
    // The counterfeit carries the same label Bob expects.
    reg.add(new_epr_pair(records.retained(seq), in_flight));
    records.sequences.push_back(seq);
  }
  std::sort(records.sequences.begin(), records.sequences.end());
  return records;
}

AncillaRefs apply_entangle_ancilla(QuantumRegister& reg,
                                   const QuantumChannel& channel,
                                   const TripartiteState& phi) {
  AncillaRefs refs;
  for (const ParticleId& in_flight : channel.in_transit) {
    reg.attach_ancilla(in_flight, phi);
    refs.sequences.push_back(in_flight.sequence);
  }
  return refs;
}

void Eavesdropper::on_transit(QuantumRegister& reg, QuantumChannel& channel) {
  if (std::holds_alternative<InterceptResend>(strategy_)) {
    intercepts_ = apply_intercept_resend(reg, channel, offset_);
  } else if (const auto* ea = std::get_if<EntangleAncilla>(&strategy_)) {
    ancillas_ = apply_entangle_ancilla(reg, channel, ea->phi);
  }
}

BellIndex Eavesdropper::infer_bob_result(QuantumRegister& reg,
                                         std::uint32_t first,
                                         std::uint32_t second, Rng& rng) const {
  if (!intercepts_.covers(first) || !intercepts_.covers(second)) {
    fail(ErrorCode::ParticleNotFound, "Eve holds no counterfeit partner for this pair");
  }
  return reg.measure(intercepts_.retained(first), intercepts_.retained(second), rng);
}

}  // namespace swapqkd

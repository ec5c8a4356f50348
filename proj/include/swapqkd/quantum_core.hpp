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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "swapqkd/tripartite_state.hpp"
#include "swapqkd/types.hpp"

namespace swapqkd {

// A set of jointly entangled particles plus an optional trailing ancilla
// factor. Basis index = (particle bits, first particle most significant)
// * ancilla_dim + ancilla index.
class Cluster {
 public:
  /// Validates length, unit norm and distinct particle ids.
  Cluster(std::vector<ParticleId> particles, StateVector amplitudes,
          std::size_t ancilla_dim = 1);

  const std::vector<ParticleId>& particles() const noexcept { return particles_; }
  const StateVector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t ancilla_dim() const noexcept { return ancilla_dim_; }
  std::size_t particle_count() const noexcept { return particles_.size(); }

  bool contains(ParticleId p) const noexcept;
  /// Position of `p` in particles(); throws ParticleNotFound.
  std::size_t position_of(ParticleId p) const;

  double norm() const noexcept;

 private:
  std::vector<ParticleId> particles_;
  StateVector amplitudes_;
  std::size_t ancilla_dim_;
};

/// |Phi+> on (id_a, id_b).
Cluster new_epr_pair(ParticleId id_a, ParticleId id_b);

/// Tensor product; particles of `first` come first, ancilla dims multiply.
Cluster merge(const Cluster& first, const Cluster& second);

/// Unnormalized projection of (p, q) onto one Bell state.
struct BellProjection {
  double probability = 0.0;
  /// Remaining particles in cluster order; empty when none are left.
  std::vector<ParticleId> rest;
  /// Amplitudes over `rest` and the ancilla, not renormalized.
  StateVector residual;
  std::size_t ancilla_dim = 1;
};

BellProjection bell_project(const Cluster& c, ParticleId p, ParticleId q,
                            BellIndex outcome);

/// Exact Born probabilities of a Bell measurement of (p, q), in enum order.
/// Entries below kZeroProbability are reported as 0.
BellDistribution outcome_distribution(const Cluster& c, ParticleId p,
                                      ParticleId q);

struct BellMeasurement {
  BellIndex outcome;
  /// (p, q) left in the observed Bell state.
  Cluster pair;
  /// Whatever else was in the cluster, renormalized. Absent when nothing but
  /// a global phase remains.
  std::optional<Cluster> residual;
};

/// Samples an outcome by inverse CDF in enum order.
BellMeasurement bell_measure(const Cluster& c, ParticleId p, ParticleId q,
                             Rng& rng);

/// Collapses to a chosen outcome. Throws InvariantViolation when the outcome
/// has zero probability.
BellMeasurement bell_collapse(const Cluster& c, ParticleId p, ParticleId q,
                              BellIndex outcome);

/// Replaces the state of a bare two-particle cluster by `phi`.
Cluster attach_ancilla(const Cluster& c, const TripartiteState& phi);

// Owns every live cluster of one simulation. Clusters are merged only when a
// measurement spans two of them.
class QuantumRegister {
 public:
  /// Throws InvalidParticleSet if any particle already lives here.
  void add(Cluster c);

  bool contains(ParticleId p) const noexcept;
  const Cluster& cluster_of(ParticleId p) const;

  /// Bell-measures (p, q), merging their clusters first if needed.
  BellIndex measure(ParticleId p, ParticleId q, Rng& rng);

  /// Distribution the next measure(p, q) would sample from.
  BellDistribution distribution(ParticleId p, ParticleId q) const;

  /// Renames a particle, e.g. on change of custody.
  void relabel(ParticleId from, ParticleId to);

  /// Swaps the state of the bare pair containing `p` for `phi`.
  void attach_ancilla(ParticleId p, const TripartiteState& phi);

  /// Live clusters, including ancilla-only leftovers.
  std::vector<const Cluster*> clusters() const;

 private:
  std::size_t slot_of(ParticleId p) const;
  std::size_t store(Cluster c);
  void put(std::size_t slot, Cluster c);

  static constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

  // Sequence numbers below kDenseLimit are looked up by direct indexing.
  class SlotIndex {
   public:
    std::size_t find(ParticleId p) const noexcept;
    void set(ParticleId p, std::size_t slot);

   private:
    static constexpr std::uint32_t kDenseLimit = 1u << 22;
    std::array<std::vector<std::size_t>, 3> dense_;
    std::map<ParticleId, std::size_t> sparse_;
  };

  std::vector<std::optional<Cluster>> slots_;
  std::vector<std::size_t> free_;
  SlotIndex where_;
};

}  // namespace swapqkd

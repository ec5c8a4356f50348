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

#include "swapqkd/quantum_core.hpp"

#include <cmath>
#include <algorithm>
#include <string>

#include "swapqkd/errors.hpp"

namespace swapqkd {

namespace {

std::string describe(ParticleId p) {
  return std::string(to_string(p.owner)) + ":" + std::to_string(p.sequence);
}

}  // namespace

Cluster::Cluster(std::vector<ParticleId> particles, StateVector amplitudes,
                 std::size_t ancilla_dim)
    : particles_(std::move(particles)),
      amplitudes_(std::move(amplitudes)),
      ancilla_dim_(ancilla_dim) {
  if (ancilla_dim_ < 1) fail(ErrorCode::InvalidState, "ancilla dimension 0");
  for (std::size_t i = 1; i < particles_.size(); ++i) {
    if (std::find(particles_.begin(), particles_.begin() + i, particles_[i]) !=
        particles_.begin() + i) {
      fail(ErrorCode::InvalidParticleSet, "duplicate particle in cluster");
    }
  }
  if (particles_.size() >= 8 * sizeof(std::size_t) - 4 ||
      amplitudes_.size() != (std::size_t{1} << particles_.size()) * ancilla_dim_) {
    fail(ErrorCode::InvalidState, "amplitude vector length does not match " +
                                      std::to_string(particles_.size()) +
                                      " particles");
  }
  if (std::abs(norm() - 1.0) > kNormTolerance) {
    fail(ErrorCode::InvalidState, "cluster state is not normalized");
  }
}

bool Cluster::contains(ParticleId p) const noexcept {
  return std::find(particles_.begin(), particles_.end(), p) != particles_.end();
}

std::size_t Cluster::position_of(ParticleId p) const {
  auto it = std::find(particles_.begin(), particles_.end(), p);
  if (it == particles_.end()) {
    fail(ErrorCode::ParticleNotFound, "particle " + describe(p) + " not in cluster");
  }
  return static_cast<std::size_t>(it - particles_.begin());
}

double Cluster::norm() const noexcept {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

Cluster new_epr_pair(ParticleId id_a, ParticleId id_b) {
  if (id_a == id_b) fail(ErrorCode::InvalidParticleSet, "EPR pair needs two particles");
  const double h = 1.0 / std::sqrt(2.0);
  return Cluster({id_a, id_b}, {h, 0.0, 0.0, h});
}

Cluster merge(const Cluster& first, const Cluster& second) {
  for (const auto& p : second.particles()) {
    if (first.contains(p)) {
      fail(ErrorCode::InvalidParticleSet, "clusters share particle " + describe(p));
    }
  }
  std::vector<ParticleId> particles = first.particles();
  particles.insert(particles.end(), second.particles().begin(),
                   second.particles().end());

  const std::size_t d1 = first.ancilla_dim();
  const std::size_t d2 = second.ancilla_dim();
  const std::size_t n1 = std::size_t{1} << first.particle_count();
  const std::size_t n2 = std::size_t{1} << second.particle_count();
  const std::size_t d = d1 * d2;
  StateVector amps(n1 * n2 * d);
  const auto& a1 = first.amplitudes();
  const auto& a2 = second.amplitudes();
  for (std::size_t b1 = 0; b1 < n1; ++b1) {
    for (std::size_t e1 = 0; e1 < d1; ++e1) {
      const Amplitude x = a1[b1 * d1 + e1];
      if (x == Amplitude{}) continue;
      for (std::size_t b2 = 0; b2 < n2; ++b2) {
        for (std::size_t e2 = 0; e2 < d2; ++e2) {
          amps[(b1 * n2 + b2) * d + e1 * d2 + e2] = x * a2[b2 * d2 + e2];
        }
      }
    }
  }
  return Cluster(std::move(particles), std::move(amps), d);
}

BellProjection bell_project(const Cluster& c, ParticleId p, ParticleId q,
                            BellIndex outcome) {
  if (p == q) fail(ErrorCode::InvalidParticleSet, "Bell measurement needs two particles");
  const std::size_t pos_p = c.position_of(p);
  const std::size_t pos_q = c.position_of(q);
  const std::size_t k = c.particle_count();
  const std::size_t d = c.ancilla_dim();
  const std::size_t shift_p = k - 1 - pos_p;
  const std::size_t shift_q = k - 1 - pos_q;

  BellProjection out;
  out.ancilla_dim = d;
  for (std::size_t i = 0; i < k; ++i) {
    if (i != pos_p && i != pos_q) out.rest.push_back(c.particles()[i]);
  }
  out.residual.assign((std::size_t{1} << (k - 2)) * d, Amplitude{});

  const auto& bell = bell_vector(outcome);
  const auto& amps = c.amplitudes();
  const std::size_t basis_count = std::size_t{1} << k;
  for (std::size_t b = 0; b < basis_count; ++b) {
    const std::size_t bit_p = (b >> shift_p) & 1u;
    const std::size_t bit_q = (b >> shift_q) & 1u;
    const double weight = bell[2 * bit_p + bit_q];
    if (weight == 0.0) continue;
    // Squeeze out the two measured bits, keeping the others in order.
    std::size_t rest = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == pos_p || i == pos_q) continue;
      rest = (rest << 1) | ((b >> (k - 1 - i)) & 1u);
    }
    for (std::size_t e = 0; e < d; ++e) {
      out.residual[rest * d + e] += weight * amps[b * d + e];
    }
  }
  for (const auto& a : out.residual) out.probability += std::norm(a);
  return out;
}

BellDistribution outcome_distribution(const Cluster& c, ParticleId p,
                                      ParticleId q) {
  BellDistribution dist{};
  for (BellIndex b : kAllBellIndices) {
    const double prob = bell_project(c, p, q, b).probability;
    dist[code_of(b)] = prob < kZeroProbability ? 0.0 : prob;
  }
  return dist;
}

namespace {

BellMeasurement finish(BellIndex outcome, ParticleId p, ParticleId q,
                       BellProjection proj) {
  if (proj.probability < kZeroProbability) {
    fail(ErrorCode::InvariantViolation,
         "collapse onto a zero-probability Bell outcome");
  }
  const auto& bell = bell_vector(outcome);
  Cluster pair({p, q}, {bell[0], bell[1], bell[2], bell[3]});

  std::optional<Cluster> residual;
  if (!proj.rest.empty() || proj.ancilla_dim > 1) {
    const double scale = 1.0 / std::sqrt(proj.probability);
    for (auto& a : proj.residual) a *= scale;
    residual.emplace(std::move(proj.rest), std::move(proj.residual),
                     proj.ancilla_dim);
  }
  return BellMeasurement{outcome, std::move(pair), std::move(residual)};
}

}  // namespace

BellMeasurement bell_collapse(const Cluster& c, ParticleId p, ParticleId q,
                              BellIndex outcome) {
  return finish(outcome, p, q, bell_project(c, p, q, outcome));
}

BellMeasurement bell_measure(const Cluster& c, ParticleId p, ParticleId q,
                             Rng& rng) {
  std::array<BellProjection, 4> projections;
  for (BellIndex b : kAllBellIndices) {
    projections[code_of(b)] = bell_project(c, p, q, b);
  }
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::optional<BellIndex> chosen;
  std::optional<BellIndex> last_possible;
  for (BellIndex b : kAllBellIndices) {
    const double prob = projections[code_of(b)].probability;
    if (prob < kZeroProbability) continue;
    last_possible = b;
    cumulative += prob;
    if (!chosen && u < cumulative) chosen = b;
  }
  if (!last_possible) {
    fail(ErrorCode::InvariantViolation, "no Bell outcome has positive probability");
  }
  // u can exceed the rounded cumulative sum by a few ulps.
  const BellIndex outcome = chosen.value_or(*last_possible);
  return finish(outcome, p, q, std::move(projections[code_of(outcome)]));
}

Cluster attach_ancilla(const Cluster& c, const TripartiteState& phi) {
  if (c.particle_count() != 2 || c.ancilla_dim() != 1) {
    fail(ErrorCode::InvalidState,
         "ancilla can only be attached to a bare two-particle cluster");
  }
  return Cluster(c.particles(), phi.amplitudes(), phi.ancilla_dim());
}

// ---------------------------------------------------------------------------

std::size_t QuantumRegister::SlotIndex::find(ParticleId p) const noexcept {
  const auto& dense = dense_[static_cast<std::size_t>(p.owner)];
  if (p.sequence < kDenseLimit) {
    return p.sequence < dense.size() ? dense[p.sequence] : kNoSlot;
  }
  auto it = sparse_.find(p);
  return it == sparse_.end() ? kNoSlot : it->second;
}

void QuantumRegister::SlotIndex::set(ParticleId p, std::size_t slot) {
  auto& dense = dense_[static_cast<std::size_t>(p.owner)];
  if (p.sequence < kDenseLimit) {
    if (p.sequence >= dense.size()) dense.resize(p.sequence + 1, kNoSlot);
    dense[p.sequence] = slot;
  } else if (slot == kNoSlot) {
    sparse_.erase(p);
  } else {
    sparse_[p] = slot;
  }
}

void QuantumRegister::add(Cluster c) {
  for (const auto& p : c.particles()) {
    if (where_.find(p) != kNoSlot) {
      fail(ErrorCode::InvalidParticleSet, "particle " + describe(p) + " already live");
    }
  }
  store(std::move(c));
}

bool QuantumRegister::contains(ParticleId p) const noexcept {
  return where_.find(p) != kNoSlot;
}

std::size_t QuantumRegister::slot_of(ParticleId p) const {
  const std::size_t slot = where_.find(p);
  if (slot == kNoSlot) {
    fail(ErrorCode::ParticleNotFound, "particle " + describe(p) + " not in register");
  }
  return slot;
}

const Cluster& QuantumRegister::cluster_of(ParticleId p) const {
  return *slots_[slot_of(p)];
}

std::size_t QuantumRegister::store(Cluster c) {
  std::size_t slot;
  if (!free_.empty()) {
    slot = free_.back();
    free_.pop_back();
  } else {
    slot = slots_.size();
    slots_.emplace_back();
  }
  put(slot, std::move(c));
  return slot;
}

void QuantumRegister::put(std::size_t slot, Cluster c) {
  for (const auto& p : c.particles()) where_.set(p, slot);
  slots_[slot] = std::move(c);
}

BellIndex QuantumRegister::measure(ParticleId p, ParticleId q, Rng& rng) {
  const std::size_t sp = slot_of(p);
  const std::size_t sq = slot_of(q);
  if (sp != sq) {
    Cluster joined = merge(*slots_[sp], *slots_[sq]);
    slots_[sq].reset();
    free_.push_back(sq);
    put(sp, std::move(joined));
  }
  BellMeasurement m = bell_measure(*slots_[sp], p, q, rng);
  put(sp, std::move(m.pair));
  if (m.residual) store(std::move(*m.residual));
  return m.outcome;
}

BellDistribution QuantumRegister::distribution(ParticleId p, ParticleId q) const {
  const std::size_t sp = slot_of(p);
  const std::size_t sq = slot_of(q);
  if (sp == sq) return outcome_distribution(*slots_[sp], p, q);
  return outcome_distribution(merge(*slots_[sp], *slots_[sq]), p, q);
}

void QuantumRegister::relabel(ParticleId from, ParticleId to) {
  if (from == to) return;
  if (where_.find(to) != kNoSlot) {
    fail(ErrorCode::InvalidParticleSet, "particle " + describe(to) + " already live");
  }
  const std::size_t slot = slot_of(from);
  const Cluster& old = *slots_[slot];
  std::vector<ParticleId> particles = old.particles();
  *std::find(particles.begin(), particles.end(), from) = to;
  Cluster renamed(std::move(particles), old.amplitudes(), old.ancilla_dim());
  where_.set(from, kNoSlot);
  put(slot, std::move(renamed));
}

void QuantumRegister::attach_ancilla(ParticleId p, const TripartiteState& phi) {
  const std::size_t slot = slot_of(p);
  put(slot, swapqkd::attach_ancilla(*slots_[slot], phi));
}

std::vector<const Cluster*> QuantumRegister::clusters() const {
  std::vector<const Cluster*> out;
  for (const auto& s : slots_) {
    if (s) out.push_back(&*s);
  }
  return out;
}

}  // namespace swapqkd

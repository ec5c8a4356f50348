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
#include <optional>
#include <string>
#include <vector>

#include "swapqkd/tripartite_state.hpp"
#include "swapqkd/types.hpp"

namespace swapqkd {

/// a_k, |psi_k>_AB and |phi_k>_E with phi = sum_k a_k |psi_k>|phi_k>.
/// Only strictly positive coefficients are kept, in descending order.
struct SchmidtForm {
  std::vector<double> coefficients;
  std::vector<std::array<Amplitude, 4>> ab_states;
  std::vector<StateVector> ancilla_states;

  std::size_t rank() const noexcept { return coefficients.size(); }
};

/// SVD of the 4 x d coefficient matrix across the AB | E cut. Each |psi_k>
/// has its first non-negligible component made real and positive.
SchmidtForm schmidt_decompose(const TripartiteState& phi);

/// Sum_k a_k |psi_k>|phi_k> flattened like TripartiteState.
StateVector reconstruct(const SchmidtForm& form);

/// v[l][k] = a_k * <l|psi_k> for l = |00>, |01>, |10>, |11>; k beyond the
/// Schmidt rank is zero.
struct VVectors {
  std::array<std::array<Amplitude, 4>, 4> v{};

  const std::array<Amplitude, 4>& operator[](std::size_t l) const { return v[l]; }
};

VVectors v_vectors(const SchmidtForm& form);
VVectors v_vectors(const TripartiteState& phi);

/// Rebuilds phi from the v-vectors and the Schmidt ancilla basis.
StateVector reconstruct(const VVectors& v, const SchmidtForm& form);

/// probs[x][y]: Alice observes Bell x, Bob Bell y, both ancillas traced out.
struct JointDistribution {
  std::array<std::array<double, 4>, 4> probs{};

  double total() const noexcept;
  double off_diagonal() const noexcept;
  double max_abs_difference(const JointDistribution& other) const noexcept;
};

/// Closed form from the v-vectors: P(x, y) = sum_rs |G_rs|^2 with
/// G = sum_{l,l'} x[a a'] y[b b'] v_l v_l'^T.
JointDistribution joint_distribution(const TripartiteState& phi);
JointDistribution joint_distribution(const VVectors& v);

/// Brute force over the full phi (x) phi amplitude vector. Shares no code
/// with the closed form.
JointDistribution joint_distribution_by_expansion(const TripartiteState& phi);

/// Probability that a checked pair disagrees.
double error_probability(const TripartiteState& phi);

/// The zero-error constraint attached to one disagreeing event (x, y).
/// `bilinear` is sum +-v_l^T v_l' with scalar transposes; `outer_norm` is the
/// Frobenius norm of the same combination taken as outer products v_l v_l'^T,
/// which equals 2 * sqrt(probability).
struct ZeroErrorCondition {
  BellIndex alice;
  BellIndex bob;
  Amplitude bilinear;
  double outer_norm;
  double probability;
};

/// All twelve off-diagonal events, row-major in (alice, bob).
std::vector<ZeroErrorCondition> zero_error_conditions(const VVectors& v);

enum class Classification { ProductBellLike, EntangledWithAncilla };

std::string_view to_string(Classification c) noexcept;

struct ClassifyResult {
  Classification kind = Classification::EntangledWithAncilla;
  /// Which Bell state the AB factor is, when ProductBellLike.
  std::optional<BellIndex> bell;
  /// Residual of the closer of the two admissible v-vector patterns.
  double pattern_residual = 0.0;
};

inline constexpr double kPatternTolerance = 1e-8;

/// Tests v1 = v4 = 0, v2 = +-v3 and v2 = v3 = 0, v1 = +-v4 within tol.
ClassifyResult classify(const TripartiteState& phi, double tol = kPatternTolerance);
ClassifyResult classify(const VVectors& v, double tol = kPatternTolerance);

/// Haar-uniform pure state on the 4d-dimensional joint space.
TripartiteState random_tripartite_state(std::size_t ancilla_dim, Rng& rng);

struct CornerCase {
  std::string name;
  TripartiteState phi;
  Classification expected;
  std::optional<BellIndex> expected_bell;
};

/// Hand-checkable states: Bell products, GHZ-like, W-like, product non-Bell
/// states and a few superpositions of Bell states.
std::vector<CornerCase> corner_case_suite();

}  // namespace swapqkd

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


#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "support.hpp"
#include "swapqkd/ancilla_analyzer.hpp"

using namespace swapqkd;

namespace {

const double h = 1.0 / std::sqrt(2.0);

TripartiteState from_terms(std::size_t d,
                           std::initializer_list<std::tuple<std::size_t, std::size_t, Amplitude>> terms) {
  StateVector amps(4 * d, 0.0);
  for (auto [ab, e, a] : terms) amps[ab * d + e] += a;
  return TripartiteState::normalized(amps, d);
}

// |phi> with the AB pair in Bell state b and a random ancilla vector, then a
// random unitary on the ancilla and a random global phase.
TripartiteState disguised_product(BellIndex b, std::size_t d, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<Amplitude> e(d);
  for (auto& x : e) x = {g(rng), g(rng)};
  const TripartiteState base = TripartiteState::bell_product(b, e);
  const Amplitude phase = std::polar(1.0, 2 * M_PI * rng.uniform());
  StateVector amps = base.amplitudes();
  for (auto& a : amps) a *= phase;
  return TripartiteState(amps, d);
}

double literal_phi_plus_psi_plus(const VVectors& v) {
  // G = (v1 v2^T + v2 v1^T + v3 v4^T + v4 v3^T) / 2 with 1-based v's.
  double p = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      const Amplitude g = 0.5 * (v[0][r] * v[1][s] + v[1][r] * v[0][s] +
                                 v[2][r] * v[3][s] + v[3][r] * v[2][s]);
      p += std::norm(g);
    }
  return p;
}

}  // namespace

TEST_CASE("Schmidt form of a product state") {
  const std::vector<Amplitude> e = {0.0, 1.0};
  const auto form = schmidt_decompose(TripartiteState::bell_product(BellIndex::PhiMinus, e));
  REQUIRE(form.rank() == 1);
  CHECK(form.coefficients[0] == doctest::Approx(1.0));
  CHECK(std::abs(form.ab_states[0][0]) == doctest::Approx(h));
  CHECK(std::abs(form.ab_states[0][3]) == doctest::Approx(h));
  CHECK(std::abs(form.ancilla_states[0][1]) == doctest::Approx(1.0));
}

TEST_CASE("Schmidt form of the GHZ-like state") {
  const auto form = schmidt_decompose(from_terms(2, {{0, 0, 1.0}, {3, 1, 1.0}}));
  REQUIRE(form.rank() == 2);
  CHECK(form.coefficients[0] == doctest::Approx(h));
  CHECK(form.coefficients[1] == doctest::Approx(h));
}

TEST_CASE("Schmidt decomposition reconstructs random states") {
  Rng rng(3);
  for (std::size_t d = 1; d <= 4; ++d) {
    for (int t = 0; t < 50; ++t) {
      const TripartiteState phi = random_tripartite_state(d, rng);
      const SchmidtForm form = schmidt_decompose(phi);
      CHECK(form.rank() <= d);
      double sum = 0;
      for (double c : form.coefficients) {
        CHECK(c > 0.0);
        sum += c * c;
      }
      CHECK(sum == doctest::Approx(1.0));
      const StateVector back = reconstruct(form);
      const StateVector via_v = reconstruct(v_vectors(form), form);
      for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(std::abs(back[i] - phi.amplitudes()[i]) < 1e-12);
        CHECK(std::abs(via_v[i] - phi.amplitudes()[i]) < 1e-12);
      }
      // Both families are orthonormal.
      for (std::size_t i = 0; i < form.rank(); ++i) {
        for (std::size_t j = 0; j < form.rank(); ++j) {
          Amplitude ab{}, anc{};
          for (std::size_t l = 0; l < 4; ++l) ab += std::conj(form.ab_states[i][l]) * form.ab_states[j][l];
          for (std::size_t e = 0; e < d; ++e)
            anc += std::conj(form.ancilla_states[i][e]) * form.ancilla_states[j][e];
          CHECK(std::abs(ab - (i == j ? 1.0 : 0.0)) < 1e-12);
          CHECK(std::abs(anc - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("joint distribution of a product Bell state is diagonal") {
  const std::vector<Amplitude> e = {1.0};
  const auto j = joint_distribution(TripartiteState::bell_product(BellIndex::PhiPlus, e));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) CHECK(j.probs[x][y] == doctest::Approx(x == y ? 0.25 : 0.0));
  CHECK(j.off_diagonal() < 1e-15);
  CHECK(j.total() == doctest::Approx(1.0));
}

TEST_CASE("joint distribution of the GHZ-like state") {
  // Frozen from the numpy tensor oracle: 1/8 on the Phi x Phi and Psi x Psi
  // blocks, zero elsewhere.
  const auto j = joint_distribution(from_terms(2, {{0, 0, 1.0}, {3, 1, 1.0}}));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      const bool same_family = (x < 2) == (y < 2);
      CHECK(j.probs[x][y] == doctest::Approx(same_family ? 0.125 : 0.0));
    }
  CHECK(j.off_diagonal() == doctest::Approx(0.5));
}

TEST_CASE("formula, expansion and simulation agree on random states") {
  Rng rng(17);
  double worst = 0.0;
  for (std::size_t d = 1; d <= 4; ++d) {
    for (int t = 0; t < 25; ++t) {
      const TripartiteState phi = random_tripartite_state(d, rng);
      const JointDistribution formula = joint_distribution(phi);
      const JointDistribution expansion = joint_distribution_by_expansion(phi);
      const auto tensor = oracle::tensor_joint(phi);
      const auto simulated = oracle::register_joint(phi);
      worst = std::max(worst, formula.max_abs_difference(expansion));
      worst = std::max(worst, oracle::max_difference(formula.probs, tensor));
      worst = std::max(worst, oracle::max_difference(formula.probs, simulated));
      CHECK(formula.total() == doctest::Approx(1.0));
      CHECK(literal_phi_plus_psi_plus(v_vectors(phi)) ==
            doctest::Approx(formula.probs[0][2]).epsilon(1e-12));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("sampled register outcomes follow the joint distribution") {
  Rng rng(12);
  const TripartiteState phi = random_tripartite_state(3, rng);
  const JointDistribution j = joint_distribution(phi);
  const ParticleId a1{0, Owner::Alice}, b1{0, Owner::Bob};
  const ParticleId a2{1, Owner::Alice}, b2{1, Owner::Bob};
  std::array<std::array<std::uint64_t, 4>, 4> counts{};
  const std::uint64_t trials = 20000;
  for (std::uint64_t t = 0; t < trials; ++t) {
    QuantumRegister reg;
    reg.add(attach_ancilla(new_epr_pair(a1, b1), phi));
    reg.add(attach_ancilla(new_epr_pair(a2, b2), phi));
    const BellIndex x = reg.measure(a1, a2, rng);
    const BellIndex y = reg.measure(b1, b2, rng);
    ++counts[code_of(x)][code_of(y)];
  }
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) CHECK(oracle::within_3_sigma(counts[x][y], trials, j.probs[x][y]));
}

TEST_CASE("Schmidt coefficients are sorted") {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto form = schmidt_decompose(random_tripartite_state(4, rng));
    for (std::size_t i = 1; i < form.rank(); ++i)
      CHECK(form.coefficients[i - 1] >= form.coefficients[i]);
  }
}

TEST_CASE("error probability of the corner states") {
  const std::vector<Amplitude> e0 = {1.0, 0.0};
  CHECK(error_probability(TripartiteState::bell_product(BellIndex::PsiPlus, e0)) < 1e-15);
  // Frozen from the numpy tensor oracle.
  CHECK(error_probability(from_terms(2, {{0, 0, 1.0}, {3, 1, 1.0}})) == doctest::Approx(0.5));
  CHECK(error_probability(from_terms(2, {{1, 0, 1.0}, {2, 0, 1.0}, {0, 1, 1.0}})) ==
        doctest::Approx(0.5));  // W-like
  CHECK(error_probability(from_terms(1, {{0, 0, 1.0}})) == doctest::Approx(0.5));
  CHECK(error_probability(from_terms(1, {{0, 0, 0.5}, {1, 0, 0.5}, {2, 0, 0.5}, {3, 0, 0.5}})) ==
        doctest::Approx(0.5));
  CHECK(error_probability(from_terms(1, {{1, 0, 1.0}, {2, 0, Amplitude(0, 1)}})) ==
        doctest::Approx(0.5));
  CHECK(error_probability(from_terms(2, {{0, 0, h}, {3, 0, h}, {0, 1, h}, {3, 1, -h}})) ==
        doctest::Approx(0.5));
  CHECK(error_probability(from_terms(2, {{0, 0, h}, {3, 0, h}, {1, 1, h}, {2, 1, -h}})) ==
        doctest::Approx(0.5));
}

TEST_CASE("corner-case suite classifies as expected") {
  const auto suite = corner_case_suite();
  CHECK(suite.size() >= 10);
  for (const CornerCase& c : suite) {
    CAPTURE(c.name);
    const ClassifyResult r = classify(c.phi);
    CHECK(r.kind == c.expected);
    CHECK(r.bell == c.expected_bell);
    const double eps = error_probability(c.phi);
    CHECK((eps < 1e-12) == (c.expected == Classification::ProductBellLike));
  }
}

TEST_CASE("classification survives global phases and ancilla unitaries") {
  Rng rng(5);
  for (BellIndex b : kAllBellIndices) {
    for (std::size_t d = 1; d <= 4; ++d) {
      const TripartiteState phi = disguised_product(b, d, rng);
      const ClassifyResult r = classify(phi);
      CHECK(r.kind == Classification::ProductBellLike);
      REQUIRE(r.bell.has_value());
      CHECK(*r.bell == b);
      CHECK(r.pattern_residual < 1e-12);
      CHECK(error_probability(phi) < 1e-12);
    }
  }
}

TEST_CASE("theorem equivalence on random draws") {
  Rng rng(2027);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const TripartiteState phi = random_tripartite_state(1 + t % 4, rng);
    const bool zero_error = error_probability(phi) < 1e-12;
    const bool product = classify(phi).kind == Classification::ProductBellLike;
    violations += zero_error != product;
  }
  CHECK(violations == 0);
}

TEST_CASE("a small entangled perturbation is detected") {
  const double delta = 1e-3;
  const TripartiteState phi = from_terms(2, {{0, 0, h}, {3, 0, h}, {1, 1, delta}});
  CHECK(classify(phi).kind == Classification::EntangledWithAncilla);
  CHECK(error_probability(phi) > 1e-8);
  CHECK(support::error_code_of([&] { classify(phi, 0.0); }) == ErrorCode::InvalidState);
}

TEST_CASE("zero-error conditions: matrix form is exact, scalar form is not") {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const TripartiteState phi = random_tripartite_state(1 + t % 4, rng);
    const VVectors v = v_vectors(phi);
    const JointDistribution j = joint_distribution(v);
    const auto conds = zero_error_conditions(v);
    REQUIRE(conds.size() == 12);
    for (const auto& c : conds) {
      CHECK(c.alice != c.bob);
      CHECK(c.probability == doctest::Approx(j.probs[code_of(c.alice)][code_of(c.bob)]).epsilon(1e-12));
      CHECK(c.outer_norm == doctest::Approx(2.0 * std::sqrt(c.probability)).epsilon(1e-12));
      // The trace can never exceed what the matrix allows.
      CHECK(std::abs(c.bilinear) <= 2.0 * c.outer_norm + 1e-12);
      // Swapping the two copies makes the Phi+/Psi- matrix antisymmetric, so
      // its trace is always zero while the event itself is not, once the
      // ancilla has room for an antisymmetric state.
      if (c.alice == BellIndex::PhiPlus && c.bob == BellIndex::PsiMinus) {
        CHECK(std::abs(c.bilinear) < 1e-12);
        if (phi.ancilla_dim() == 1) {
          CHECK(c.probability < 1e-15);
        } else {
          CHECK(c.probability > 1e-6);
        }
      }
    }
  }
  // For product Bell states every condition vanishes in both forms.
  const std::vector<Amplitude> e = {0.6, 0.8};
  for (BellIndex b : kAllBellIndices) {
    for (const auto& c : zero_error_conditions(v_vectors(TripartiteState::bell_product(b, e)))) {
      CHECK(c.outer_norm < 1e-12);
      CHECK(std::abs(c.bilinear) < 1e-12);
    }
  }
}

TEST_CASE("GHZ-like state: every trace vanishes yet the error is 1/2") {
  // Frozen from the numpy oracle: all twelve scalar traces are zero, while
  // the off-diagonal mass is 0.5. Only the matrix reading sees the error.
  const TripartiteState ghz = from_terms(2, {{0, 0, 1.0}, {3, 1, 1.0}});
  double total = 0.0;
  for (const auto& c : zero_error_conditions(v_vectors(ghz))) {
    CHECK(std::abs(c.bilinear) < 1e-12);
    total += c.probability;
  }
  CHECK(total == doctest::Approx(0.5));
  CHECK(classify(ghz).kind == Classification::EntangledWithAncilla);
}

TEST_CASE("random draws are normalized and reproducible") {
  Rng a(4), b(4);
  for (std::size_t d = 1; d <= 4; ++d) {
    const TripartiteState x = random_tripartite_state(d, a);
    const TripartiteState y = random_tripartite_state(d, b);
    CHECK(x.amplitudes() == y.amplitudes());
    CHECK(x.ancilla_dim() == d);
  }
  CHECK(support::error_code_of([&] { random_tripartite_state(5, a); }) == ErrorCode::InvalidState);
}

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

#include "swapqkd/ancilla_analyzer.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "swapqkd/errors.hpp"

namespace swapqkd {

namespace {

constexpr double kRankCutoff = 1e-12;

using Vec4 = std::array<Amplitude, 4>;

double norm_of(const Vec4& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

Vec4 combine(const Vec4& a, const Vec4& b, double sign) {
  Vec4 out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = a[i] + sign * b[i];
  return out;
}

// Weight of |l>|l'> in <x|_A1A2 <y|_B1B2 for l = (a, b), l' = (a', b').
double pair_weight(BellIndex x, BellIndex y, std::size_t l, std::size_t lp) {
  const std::size_t a = l >> 1, b = l & 1u;
  const std::size_t ap = lp >> 1, bp = lp & 1u;
  return bell_vector(x)[2 * a + ap] * bell_vector(y)[2 * b + bp];
}

}  // namespace

SchmidtForm schmidt_decompose(const TripartiteState& phi) {
  const std::size_t d = phi.ancilla_dim();
  Eigen::MatrixXcd m(4, static_cast<Eigen::Index>(d));
  for (std::size_t ab = 0; ab < 4; ++ab) {
    for (std::size_t e = 0; e < d; ++e) m(ab, e) = phi.at(ab, e);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const auto& u = svd.matrixU();
  const auto& v = svd.matrixV();

  SchmidtForm form;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) <= kRankCutoff) continue;
    Vec4 psi;
    for (std::size_t ab = 0; ab < 4; ++ab) psi[ab] = u(ab, k);
    StateVector anc(d);
    // m = U S V^*, so the ancilla factor is the conjugated column of V.
    for (std::size_t e = 0; e < d; ++e) anc[e] = std::conj(v(e, k));

    for (const auto& c : psi) {
      if (std::abs(c) > kRankCutoff) {
        const Amplitude phase = c / std::abs(c);
        for (auto& x : psi) x *= std::conj(phase);
        for (auto& x : anc) x *= phase;
        break;
      }
    }
    form.coefficients.push_back(sigma(k));
    form.ab_states.push_back(psi);
    form.ancilla_states.push_back(std::move(anc));
  }
  return form;
}

StateVector reconstruct(const SchmidtForm& form) {
  const std::size_t d = form.ancilla_states.empty() ? 1 : form.ancilla_states[0].size();
  StateVector out(4 * d);
  for (std::size_t k = 0; k < form.rank(); ++k) {
    for (std::size_t ab = 0; ab < 4; ++ab) {
      for (std::size_t e = 0; e < d; ++e) {
        out[ab * d + e] +=
            form.coefficients[k] * form.ab_states[k][ab] * form.ancilla_states[k][e];
      }
    }
  }
  return out;
}

VVectors v_vectors(const SchmidtForm& form) {
  VVectors out;
  for (std::size_t k = 0; k < form.rank() && k < 4; ++k) {
    for (std::size_t l = 0; l < 4; ++l) {
      out.v[l][k] = form.coefficients[k] * form.ab_states[k][l];
    }
  }
  return out;
}

VVectors v_vectors(const TripartiteState& phi) {
  return v_vectors(schmidt_decompose(phi));
}

StateVector reconstruct(const VVectors& v, const SchmidtForm& form) {
  const std::size_t d = form.ancilla_states.empty() ? 1 : form.ancilla_states[0].size();
  StateVector out(4 * d);
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t k = 0; k < form.rank(); ++k) {
      for (std::size_t e = 0; e < d; ++e) {
        out[l * d + e] += v[l][k] * form.ancilla_states[k][e];
      }
    }
  }
  return out;
}

double JointDistribution::total() const noexcept {
  double s = 0.0;
  for (const auto& row : probs)
    for (double p : row) s += p;
  return s;
}

double JointDistribution::off_diagonal() const noexcept {
  double s = 0.0;
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      if (x != y) s += probs[x][y];
  return s;
}

double JointDistribution::max_abs_difference(const JointDistribution& other) const noexcept {
  double m = 0.0;
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      m = std::max(m, std::abs(probs[x][y] - other.probs[x][y]));
  return m;
}

JointDistribution joint_distribution(const VVectors& v) {
  JointDistribution out;
  for (BellIndex x : kAllBellIndices) {
    for (BellIndex y : kAllBellIndices) {
      std::array<std::array<Amplitude, 4>, 4> g{};
      for (std::size_t l = 0; l < 4; ++l) {
        for (std::size_t lp = 0; lp < 4; ++lp) {
          const double w = pair_weight(x, y, l, lp);
          if (w == 0.0) continue;
          for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t s = 0; s < 4; ++s) g[r][s] += w * v[l][r] * v[lp][s];
        }
      }
      double p = 0.0;
      for (const auto& row : g)
        for (const auto& a : row) p += std::norm(a);
      out.probs[code_of(x)][code_of(y)] = p;
    }
  }
  return out;
}

JointDistribution joint_distribution(const TripartiteState& phi) {
  return joint_distribution(v_vectors(phi));
}

JointDistribution joint_distribution_by_expansion(const TripartiteState& phi) {
  const std::size_t d = phi.ancilla_dim();
  const auto& amps = phi.amplitudes();
  // Joint vector over (A1, B1, E1, A2, B2, E2).
  const std::size_t half = 4 * d;
  StateVector joint(half * half);
  for (std::size_t i = 0; i < half; ++i)
    for (std::size_t j = 0; j < half; ++j) joint[i * half + j] = amps[i] * amps[j];

  JointDistribution out;
  for (BellIndex x : kAllBellIndices) {
    const auto& bx = bell_vector(x);
    for (BellIndex y : kAllBellIndices) {
      const auto& by = bell_vector(y);
      double p = 0.0;
      for (std::size_t e1 = 0; e1 < d; ++e1) {
        for (std::size_t e2 = 0; e2 < d; ++e2) {
          Amplitude amp{};
          for (std::size_t a1 = 0; a1 < 2; ++a1)
            for (std::size_t b1 = 0; b1 < 2; ++b1)
              for (std::size_t a2 = 0; a2 < 2; ++a2)
                for (std::size_t b2 = 0; b2 < 2; ++b2) {
                  const std::size_t i = ((a1 * 2 + b1) * d) + e1;
                  const std::size_t j = ((a2 * 2 + b2) * d) + e2;
                  amp += bx[a1 * 2 + a2] * by[b1 * 2 + b2] * joint[i * half + j];
                }
          p += std::norm(amp);
        }
      }
      out.probs[code_of(x)][code_of(y)] = p;
    }
  }
  return out;
}

double error_probability(const TripartiteState& phi) {
  return joint_distribution(phi).off_diagonal();
}

std::vector<ZeroErrorCondition> zero_error_conditions(const VVectors& v) {
  std::vector<ZeroErrorCondition> out;
  for (BellIndex x : kAllBellIndices) {
    for (BellIndex y : kAllBellIndices) {
      if (x == y) continue;
      Amplitude bilinear{};
      std::array<std::array<Amplitude, 4>, 4> outer{};
      for (std::size_t l = 0; l < 4; ++l) {
        for (std::size_t lp = 0; lp < 4; ++lp) {
          // Bell amplitudes are +-1/sqrt(2), so the weight is +-1/2.
          const double w = 2.0 * pair_weight(x, y, l, lp);
          if (w == 0.0) continue;
          for (std::size_t r = 0; r < 4; ++r) {
            bilinear += w * v[l][r] * v[lp][r];
            for (std::size_t s = 0; s < 4; ++s) outer[r][s] += w * v[l][r] * v[lp][s];
          }
        }
      }
      double frob = 0.0;
      for (const auto& row : outer)
        for (const auto& a : row) frob += std::norm(a);
      out.push_back({x, y, bilinear, std::sqrt(frob), frob / 4.0});
    }
  }
  return out;
}

std::string_view to_string(Classification c) noexcept {
  return c == Classification::ProductBellLike ? "ProductBellLike"
                                              : "EntangledWithAncilla";
}

ClassifyResult classify(const VVectors& v, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidState, "classification tolerance must be positive");
  const double plus23 = norm_of(combine(v[1], v[2], -1.0));
  const double minus23 = norm_of(combine(v[1], v[2], 1.0));
  const double plus14 = norm_of(combine(v[0], v[3], -1.0));
  const double minus14 = norm_of(combine(v[0], v[3], 1.0));

  // v1 = v4 = 0 and v2 = +-v3: the pair is (|01> +- |10>)/sqrt2.
  const double psi_residual =
      std::max({norm_of(v[0]), norm_of(v[3]), std::min(plus23, minus23)});
  // v2 = v3 = 0 and v1 = +-v4: the pair is (|00> +- |11>)/sqrt2.
  const double phi_residual =
      std::max({norm_of(v[1]), norm_of(v[2]), std::min(plus14, minus14)});

  ClassifyResult out;
  out.pattern_residual = std::min(psi_residual, phi_residual);
  if (psi_residual <= tol && psi_residual <= phi_residual) {
    out.kind = Classification::ProductBellLike;
    out.bell = plus23 <= minus23 ? BellIndex::PsiPlus : BellIndex::PsiMinus;
  } else if (phi_residual <= tol) {
    out.kind = Classification::ProductBellLike;
    out.bell = plus14 <= minus14 ? BellIndex::PhiPlus : BellIndex::PhiMinus;
  }
  return out;
}

ClassifyResult classify(const TripartiteState& phi, double tol) {
  return classify(v_vectors(phi), tol);
}

TripartiteState random_tripartite_state(std::size_t ancilla_dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  StateVector amps(4 * ancilla_dim);
  for (auto& a : amps) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    a = {re, im};
  }
  return TripartiteState::normalized(std::move(amps), ancilla_dim);
}

std::vector<CornerCase> corner_case_suite() {
  using C = Classification;
  const double h = 1.0 / std::sqrt(2.0);
  const Amplitude i{0.0, 1.0};
  std::vector<CornerCase> out;

  auto bell_with = [](BellIndex b, StateVector anc) {
    return TripartiteState::bell_product(b, anc);
  };
  // Builds sum_j coeff_j |bell_j>|j>_E.
  auto bell_superposition = [&](std::vector<std::pair<BellIndex, Amplitude>> terms) {
    const std::size_t d = terms.size();
    StateVector amps(4 * d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto& b = bell_vector(terms[j].first);
      for (std::size_t ab = 0; ab < 4; ++ab) amps[ab * d + j] = terms[j].second * b[ab];
    }
    return TripartiteState::normalized(std::move(amps), d);
  };

  out.push_back({"phi_plus_bare", bell_with(BellIndex::PhiPlus, {1.0}),
                 C::ProductBellLike, BellIndex::PhiPlus});
  out.push_back({"phi_plus_x_ket0", bell_with(BellIndex::PhiPlus, {1.0, 0.0}),
                 C::ProductBellLike, BellIndex::PhiPlus});
  out.push_back({"phi_minus_x_plus", bell_with(BellIndex::PhiMinus, {h, h}),
                 C::ProductBellLike, BellIndex::PhiMinus});
  out.push_back({"psi_plus_x_qutrit", bell_with(BellIndex::PsiPlus, {h, i * h, 0.0}),
                 C::ProductBellLike, BellIndex::PsiPlus});
  out.push_back({"psi_minus_x_uniform4",
                 bell_with(BellIndex::PsiMinus, {0.5, 0.5, 0.5, 0.5}),
                 C::ProductBellLike, BellIndex::PsiMinus});
  {
    const Amplitude g = std::polar(1.0, 0.7);
    out.push_back({"phi_plus_global_phase",
                   bell_with(BellIndex::PhiPlus, {0.6 * g, 0.8 * i * g}),
                   C::ProductBellLike, BellIndex::PhiPlus});
  }
  {
    StateVector amps(8);
    amps[0 * 2 + 0] = h;  // |00>|0>
    amps[3 * 2 + 1] = h;  // |11>|1>
    out.push_back({"ghz_like", TripartiteState(std::move(amps), 2),
                   C::EntangledWithAncilla, std::nullopt});
  }
  {
    StateVector amps(8);
    amps[0 * 2 + 1] = 1.0;  // |00>|1>
    amps[1 * 2 + 0] = 1.0;  // |01>|0>
    amps[2 * 2 + 0] = 1.0;  // |10>|0>
    out.push_back({"w_like", TripartiteState::normalized(std::move(amps), 2),
                   C::EntangledWithAncilla, std::nullopt});
  }
  out.push_back({"product_00", TripartiteState({1.0, 0.0, 0.0, 0.0}, 1),
                 C::EntangledWithAncilla, std::nullopt});
  out.push_back({"product_plus_plus",
                 TripartiteState::normalized({1.0, 1.0, 1.0, 1.0}, 1),
                 C::EntangledWithAncilla, std::nullopt});
  out.push_back({"product_psi_with_i_phase",
                 TripartiteState::normalized({0.0, 0.0, 1.0, 0.0, i, 0.0, 0.0, 0.0}, 2),
                 C::EntangledWithAncilla, std::nullopt});
  out.push_back({"phi_plus_phi_minus_superposition",
                 bell_superposition({{BellIndex::PhiPlus, 1.0}, {BellIndex::PhiMinus, 1.0}}),
                 C::EntangledWithAncilla, std::nullopt});
  out.push_back({"phi_plus_psi_minus_superposition",
                 bell_superposition({{BellIndex::PhiPlus, 1.0}, {BellIndex::PsiMinus, 1.0}}),
                 C::EntangledWithAncilla, std::nullopt});
  out.push_back({"all_bell_states_rank4",
                 bell_superposition({{BellIndex::PhiPlus, 1.0},
                                     {BellIndex::PhiMinus, 1.0},
                                     {BellIndex::PsiPlus, 1.0},
                                     {BellIndex::PsiMinus, 1.0}}),
                 C::EntangledWithAncilla, std::nullopt});
  return out;
}

}  // namespace swapqkd

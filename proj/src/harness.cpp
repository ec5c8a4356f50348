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

#include "swapqkd/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "swapqkd/ancilla_analyzer.hpp"
#include "swapqkd/errors.hpp"

namespace swapqkd {

using nlohmann::ordered_json;

namespace {

// 99th percentile of chi-square with 3 degrees of freedom.
constexpr double kChiSquare3Dof99 = 11.344866730144373;
constexpr double kZeroErrorThreshold = 1e-12;
constexpr double kFormulaResidualLimit = 1e-9;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

ordered_json rate_json(std::uint64_t hits, std::uint64_t trials) {
  const auto [lo, hi] = wilson_interval(hits, trials);
  ordered_json out;
  out["count"] = hits;
  out["trials"] = trials;
  out["rate"] = static_cast<double>(hits) / static_cast<double>(trials);
  out["wilson95"] = {lo, hi};
  return out;
}

double binomial_sigma(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// Collects named pass/fail checks for the report.
class Checks {
 public:
  void add(std::string name, bool ok, ordered_json detail = {}) {
    ordered_json c;
    c["name"] = std::move(name);
    c["passed"] = ok;
    if (!detail.is_null()) c["detail"] = std::move(detail);
    list_.push_back(std::move(c));
    all_ok_ = all_ok_ && ok;
  }
  bool ok() const { return all_ok_; }
  ordered_json json() const { return list_; }

 private:
  ordered_json list_ = ordered_json::array();
  bool all_ok_ = true;
};

Report finish(const ExperimentSpec& spec, ordered_json results, const Checks& checks) {
  const ordered_json config = to_json(spec);
  ordered_json meta;
  meta["tool"] = "swapqkd";
  meta["version"] = std::string(kVersion);
  meta["seed"] = spec.seed;
  meta["config_hash"] = fnv1a_hex(config.dump());
  meta["generated_at"] = utc_timestamp();
  meta["config"] = config;

  Report r;
  r.document["experiment"] = std::string(to_string(spec.kind));
  r.document["metadata"] = std::move(meta);
  r.document["results"] = std::move(results);
  r.document["checks"] = checks.json();
  r.document["passed"] = checks.ok();
  r.passed = checks.ok();
  return r;
}

ordered_json bits_json(const BitString& bits) { return bits_to_string(bits); }

ordered_json distribution_json(const JointDistribution& j) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : j.probs) rows.push_back(row);
  return rows;
}

ordered_json v_vectors_json(const VVectors& v) {
  ordered_json out = ordered_json::array();
  for (const auto& vec : v.v) {
    ordered_json comps = ordered_json::array();
    for (const auto& c : vec) comps.push_back({c.real(), c.imag()});
    out.push_back(std::move(comps));
  }
  return out;
}

}  // namespace

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Report run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ExperimentKind::SingleSession: return run_single_session(spec);
    case ExperimentKind::DetectionCurve: return run_detection_curve(spec);
    case ExperimentKind::ImpersonationTrials: return run_impersonation_trials(spec);
    case ExperimentKind::EsDistribution: return run_es_distribution(spec);
    case ExperimentKind::AnalyzerCheck: return run_analyzer_check(spec);
  }
  fail(ErrorCode::ConfigError, "unknown experiment kind");
}

Report run_single_session(const ExperimentSpec& spec) {
  const SessionConfig config = session_for_trial(spec, 0);
  const SessionResult r = run_session(config);

  ordered_json res;
  res["session_seed"] = config.seed;
  res["verdict"] = std::string(to_string(r.verdict));
  if (!r.abort_reason.empty()) res["abort_reason"] = r.abort_reason;
  res["mismatch_count"] = r.mismatch_count;
  res["alice_accepted_bob"] = r.alice_accepted_bob;
  res["bob_accepted_alice"] = r.bob_accepted_alice;
  res["raw_key_bits"] = r.bob.raw_key.size();
  res["discarded_particles"] = r.discarded_particles;
  res["id_bits_used"] = r.id_bits_used;
  res["alice_key"] = bits_json(r.alice.key_bits);
  res["bob_key"] = bits_json(r.bob.key_bits);
  res["alice_new_id"] = bits_json(r.alice.new_id.bits);
  res["bob_new_id"] = bits_json(r.bob.new_id.bits);
  if (r.eve_key) res["eve_raw_key"] = bits_json(*r.eve_key);
  res["transcript_events"] = r.transcript.events().size();

  Checks checks;
  checks.add("otp_material_within_id", r.id_bits_used <= config.initial_id.size());
  if (r.verdict == Verdict::KeyEstablished) {
    checks.add("keys_agree", r.alice.key_bits == r.bob.key_bits);
    checks.add("renewed_ids_agree", r.alice.new_id == r.bob.new_id);
  }
  if (std::holds_alternative<NoAttack>(spec.attack)) {
    checks.add("honest_run_establishes_key", r.verdict == Verdict::KeyEstablished);
  }
  Report report = finish(spec, std::move(res), checks);
  report.transcript_jsonl = r.transcript.to_jsonl();
  return report;
}

Report run_detection_curve(const ExperimentSpec& spec) {
  double reference_error = 0.0;
  std::string reference_kind = "none";
  if (std::holds_alternative<InterceptResend>(spec.attack)) {
    reference_error = 0.75;
    reference_kind = "(1/4)^s";
  } else if (const auto* ea = std::get_if<EntangleAncilla>(&spec.attack)) {
    reference_error = error_probability(ea->phi);
    reference_kind = "(1 - error_probability)^s";
  }

  Checks checks;
  ordered_json rows = ordered_json::array();
  for (std::size_t si = 0; si < spec.s_values.size(); ++si) {
    const std::uint32_t s = spec.s_values[si];
    std::uint64_t passes = 0;
    std::string outcomes;
    outcomes.reserve(spec.trials);
    ExperimentSpec per_s = spec;
    per_s.seed = derive_seed(spec.seed, si);
    for (std::uint64_t t = 0; t < spec.trials; ++t) {
      SessionConfig config = session_for_trial(per_s, t);
      config.s_detect = s;
      Session session(config);
      session.prepare_and_send();
      const bool passed = session.detect_eavesdropping().passed;
      passes += passed ? 1 : 0;
      outcomes.push_back(passed ? 'P' : 'F');
    }
    const double reference = std::pow(1.0 - reference_error, static_cast<double>(s));
    const double sigma = binomial_sigma(reference, spec.trials);
    const double rate = static_cast<double>(passes) / static_cast<double>(spec.trials);
    const bool within = std::abs(rate - reference) <= 3.0 * sigma + 1e-12;

    ordered_json row;
    row["s"] = s;
    row["pass"] = rate_json(passes, spec.trials);
    row["reference"] = reference;
    row["sigma"] = sigma;
    row["within_3_sigma"] = within;
    row["outcomes"] = std::move(outcomes);
    rows.push_back(std::move(row));
    checks.add("pass_rate_s" + std::to_string(s), within);
  }
  ordered_json res;
  res["reference_formula"] = reference_kind;
  res["reference_error_per_pair"] = reference_error;
  res["curve"] = std::move(rows);
  return finish(spec, std::move(res), checks);
}

Report run_es_distribution(const ExperimentSpec& spec) {
  const ParticleId p1{1, Owner::Alice}, p2{2, Owner::Bob};
  const ParticleId p3{3, Owner::Alice}, p4{4, Owner::Bob};

  // Exact side: outcome law of (1,3), then the conditional law of (2,4).
  const Cluster joint = merge(new_epr_pair(p1, p2), new_epr_pair(p3, p4));
  const BellDistribution first = outcome_distribution(joint, p1, p3);
  std::array<std::array<double, 4>, 4> exact{};
  for (BellIndex x : kAllBellIndices) {
    if (first[code_of(x)] == 0.0) continue;
    const BellMeasurement m = bell_collapse(joint, p1, p3, x);
    const BellDistribution second = outcome_distribution(*m.residual, p2, p4);
    for (BellIndex y : kAllBellIndices) {
      exact[code_of(x)][code_of(y)] = first[code_of(x)] * second[code_of(y)];
    }
  }

  std::array<std::array<std::uint64_t, 4>, 4> counts{};
  std::string outcomes;
  outcomes.reserve(spec.trials);
  for (std::uint64_t t = 0; t < spec.trials; ++t) {
    Rng rng(derive_seed(spec.seed, t));
    QuantumRegister reg;
    reg.add(new_epr_pair(p1, p2));
    reg.add(new_epr_pair(p3, p4));
    const BellIndex x = reg.measure(p1, p3, rng);
    const BellIndex y = reg.measure(p2, p4, rng);
    ++counts[code_of(x)][code_of(y)];
    outcomes.push_back("0123456789abcdef"[code_of(x) * 4 + code_of(y)]);
  }

  Checks checks;
  double exact_err = 0.0;
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      exact_err = std::max(exact_err, std::abs(exact[x][y] - (x == y ? 0.25 : 0.0)));
  checks.add("exact_distribution", exact_err <= 1e-12, exact_err);

  std::uint64_t off_diagonal = 0;
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      if (x != y) off_diagonal += counts[x][y];
  checks.add("off_diagonal_zero", off_diagonal == 0, off_diagonal);

  const double n = static_cast<double>(spec.trials);
  const double sigma = binomial_sigma(0.25, spec.trials);
  double chi_square = 0.0;
  bool within = true;
  ordered_json diag = ordered_json::array();
  for (std::size_t x = 0; x < 4; ++x) {
    const double rate = static_cast<double>(counts[x][x]) / n;
    within = within && std::abs(rate - 0.25) <= 3.0 * sigma;
    const double expected = 0.25 * n;
    chi_square += (counts[x][x] - expected) * (counts[x][x] - expected) / expected;
    diag.push_back(rate_json(counts[x][x], spec.trials));
  }
  checks.add("diagonal_within_3_sigma", within);
  checks.add("chi_square_below_99th_percentile", chi_square < kChiSquare3Dof99, chi_square);

  ordered_json res;
  ordered_json exact_rows = ordered_json::array();
  for (const auto& row : exact) exact_rows.push_back(row);
  ordered_json count_rows = ordered_json::array();
  for (const auto& row : counts) count_rows.push_back(row);
  res["exact"] = std::move(exact_rows);
  res["counts"] = std::move(count_rows);
  res["diagonal"] = std::move(diag);
  res["sigma"] = sigma;
  res["chi_square"] = chi_square;
  res["chi_square_threshold"] = kChiSquare3Dof99;
  res["outcomes"] = std::move(outcomes);
  return finish(spec, std::move(res), checks);
}

Report run_impersonation_trials(const ExperimentSpec& spec) {
  std::uint64_t accepted = 0;
  std::string outcomes;
  outcomes.reserve(spec.trials);
  for (std::uint64_t t = 0; t < spec.trials; ++t) {
    Session session(session_for_trial(spec, t));
    session.prepare_and_send();
    bool ok = false;
    if (session.detect_eavesdropping().passed) {
      const IdentificationOutcome id = session.identify();
      ok = spec.role == Impersonation::EveAsAlice
               ? id.bob_accepted_alice
               : id.alice_accepted_bob;
    }
    accepted += ok ? 1 : 0;
    outcomes.push_back(ok ? '1' : '0');
  }
  const double reference = std::pow(0.25, static_cast<double>(spec.session.k_identify));
  const double sigma = binomial_sigma(reference, spec.trials);
  const double rate = static_cast<double>(accepted) / static_cast<double>(spec.trials);

  Checks checks;
  if (spec.role == Impersonation::EveAsAlice) {
    checks.add("acceptance_within_3_sigma", std::abs(rate - reference) <= 3.0 * sigma);
  } else {
    checks.add("acceptance_bounded", rate <= reference + 3.0 * sigma);
  }
  ordered_json res;
  res["role"] = spec.role == Impersonation::EveAsAlice ? "as_alice" : "as_bob";
  res["k_identify"] = spec.session.k_identify;
  res["acceptance"] = rate_json(accepted, spec.trials);
  res["reference"] = reference;
  res["sigma"] = sigma;
  res["outcomes"] = std::move(outcomes);
  return finish(spec, std::move(res), checks);
}

Report run_analyzer_check(const ExperimentSpec& spec) {
  struct Item {
    std::string name;
    TripartiteState phi;
    std::optional<Classification> expected;
    std::optional<BellIndex> expected_bell;
  };
  std::vector<Item> items;
  bool detailed = true;
  switch (spec.phi_source) {
    case PhiSource::Corner:
      for (auto& c : corner_case_suite()) {
        items.push_back({c.name, std::move(c.phi), c.expected, c.expected_bell});
      }
      break;
    case PhiSource::File: {
      auto states = load_states(spec.phi_file);
      for (std::size_t i = 0; i < states.size(); ++i) {
        items.push_back({"file[" + std::to_string(i) + "]", std::move(states[i]), {}, {}});
      }
      break;
    }
    case PhiSource::Random:
      detailed = false;
      for (std::uint64_t i = 0; i < spec.draws; ++i) {
        Rng rng(derive_seed(spec.seed, i));
        items.push_back({"haar[" + std::to_string(i) + "]",
                         random_tripartite_state(1 + i % 4, rng), {}, {}});
      }
      break;
  }

  std::uint64_t violations = 0;
  std::uint64_t expectation_misses = 0;
  std::uint64_t product_bell_like = 0;
  double max_residual = 0.0;
  ordered_json records = ordered_json::array();
  for (const auto& item : items) {
    const VVectors v = v_vectors(item.phi);
    const JointDistribution formula = joint_distribution(v);
    const JointDistribution expansion = joint_distribution_by_expansion(item.phi);
    const double residual = formula.max_abs_difference(expansion);
    const double err = formula.off_diagonal();
    const ClassifyResult cls = classify(v);
    const bool zero_error = err < kZeroErrorThreshold;
    const bool pbl = cls.kind == Classification::ProductBellLike;
    max_residual = std::max(max_residual, residual);
    if (zero_error != pbl) ++violations;
    if (pbl) ++product_bell_like;
    bool as_expected = true;
    if (item.expected) {
      as_expected = *item.expected == cls.kind && item.expected_bell == cls.bell;
      if (!as_expected) ++expectation_misses;
    }

    ordered_json rec;
    rec["name"] = item.name;
    rec["ancilla_dim"] = item.phi.ancilla_dim();
    rec["error_probability"] = err;
    rec["classification"] = std::string(to_string(cls.kind));
    if (cls.bell) rec["bell"] = std::string(to_string(*cls.bell));
    rec["pattern_residual"] = cls.pattern_residual;
    rec["formula_vs_expansion"] = residual;
    rec["equivalence_holds"] = zero_error == pbl;
    if (item.expected) rec["matches_expectation"] = as_expected;
    if (detailed) {
      rec["v_vectors"] = v_vectors_json(v);
      rec["joint_distribution"] = distribution_json(formula);
    }
    records.push_back(std::move(rec));
  }

  Checks checks;
  checks.add("theorem_equivalence", violations == 0, violations);
  checks.add("formula_matches_expansion", max_residual < kFormulaResidualLimit, max_residual);
  if (spec.phi_source == PhiSource::Corner) {
    checks.add("corner_cases_as_expected", expectation_misses == 0, expectation_misses);
  }
  ordered_json res;
  res["states"] = items.size();
  res["product_bell_like"] = product_bell_like;
  res["equivalence_violations"] = violations;
  res["max_formula_residual"] = max_residual;
  res["records"] = std::move(records);
  return finish(spec, std::move(res), checks);
}

}  // namespace swapqkd

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

// Config document parsing and serialization for the experiment harness.

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "swapqkd/errors.hpp"
#include "swapqkd/harness.hpp"

namespace swapqkd {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::ConfigError, what); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) bad("unknown key '" + key + "' in " + where);
  }
}

std::uint64_t as_uint(const json& j, const std::string& name) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<std::int64_t>() < 0)) {
    bad("'" + name + "' must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::uint32_t as_u32(const json& j, const std::string& name) {
  const auto v = as_uint(j, name);
  if (v > 0xFFFFFFFFull) bad("'" + name + "' is out of range");
  return static_cast<std::uint32_t>(v);
}

std::string as_string(const json& j, const std::string& name) {
  if (!j.is_string()) bad("'" + name + "' must be a string");
  return j.get<std::string>();
}

std::uint64_t default_trials(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SingleSession: return 1;
    case ExperimentKind::DetectionCurve: return 10000;
    case ExperimentKind::ImpersonationTrials: return 10000;
    case ExperimentKind::EsDistribution: return 100000;
    case ExperimentKind::AnalyzerCheck: return 1;
  }
  return 1;
}

std::string_view role_name(Impersonation r) {
  return r == Impersonation::EveAsBob ? "as_bob" : "as_alice";
}

std::string_view phi_source_name(PhiSource s) {
  switch (s) {
    case PhiSource::Random: return "random";
    case PhiSource::Corner: return "corner";
    case PhiSource::File: return "file";
  }
  return "?";
}

}  // namespace

std::string_view to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::SingleSession: return "session";
    case ExperimentKind::DetectionCurve: return "detection-curve";
    case ExperimentKind::ImpersonationTrials: return "impersonation";
    case ExperimentKind::EsDistribution: return "es-dist";
    case ExperimentKind::AnalyzerCheck: return "analyze";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (auto k : {ExperimentKind::SingleSession, ExperimentKind::DetectionCurve,
                 ExperimentKind::ImpersonationTrials, ExperimentKind::EsDistribution,
                 ExperimentKind::AnalyzerCheck}) {
    if (to_string(k) == name) return k;
  }
  bad("unknown experiment '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  if (trials < 1) bad("trials must be at least 1");
  if (kind == ExperimentKind::DetectionCurve) {
    if (s_values.empty()) bad("detection curve needs at least one s value");
    for (auto s : s_values) {
      if (s < 1) bad("s values must be at least 1");
    }
  }
  if (kind == ExperimentKind::AnalyzerCheck) {
    if (phi_source == PhiSource::File && phi_file.empty()) bad("phi_source 'file' needs phi_file");
    if (phi_source == PhiSource::Random && draws < 1) bad("draws must be at least 1");
  }
  if (session.initial_id && session.initial_id->size() != session.id_bits) {
    bad("initial_id length differs from id_bits");
  }
  if (kind != ExperimentKind::AnalyzerCheck && kind != ExperimentKind::EsDistribution) {
    SessionConfig probe = session_for_trial(*this, 0);
    if (kind == ExperimentKind::DetectionCurve) {
      for (auto s : s_values) {
        probe.s_detect = s;
        probe.validate();
      }
    } else {
      probe.validate();
    }
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SWAPQKD_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used, 0);
      if (used == std::strlen(env)) return v;
    } catch (const std::exception&) {
    }
    bad("SWAPQKD_SEED is not an unsigned integer");
  }
  return 1;
}

TripartiteState parse_tripartite(const json& j) {
  try {
    if (!j.is_object()) fail(ErrorCode::ParseError, "state must be a JSON object");
    reject_unknown(j, {"ancilla_dim", "amplitudes", "name"}, "state");
    if (!j.contains("amplitudes") || !j.at("amplitudes").is_array()) {
      fail(ErrorCode::ParseError, "state needs an 'amplitudes' array");
    }
    const auto& list = j.at("amplitudes");
    const std::size_t d = j.contains("ancilla_dim")
                              ? as_uint(j.at("ancilla_dim"), "ancilla_dim")
                              : list.size() / 4;
    StateVector amps;
    for (const auto& a : list) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
        fail(ErrorCode::ParseError, "each amplitude must be [re, im]");
      }
      amps.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
    return TripartiteState(std::move(amps), d);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidState) throw;
    fail(ErrorCode::ParseError, e.what());
  }
}

ordered_json to_json(const TripartiteState& phi) {
  ordered_json out;
  out["ancilla_dim"] = phi.ancilla_dim();
  ordered_json amps = ordered_json::array();
  for (const auto& a : phi.amplitudes()) amps.push_back({a.real(), a.imag()});
  out["amplitudes"] = std::move(amps);
  return out;
}

AttackStrategy parse_attack(const json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "none") return NoAttack{};
    if (name == "intercept_resend") return InterceptResend{};
    bad("unknown attack '" + name + "'");
  }
  if (j.is_object() && j.size() == 1 && j.contains("entangle_ancilla")) {
    return EntangleAncilla{parse_tripartite(j.at("entangle_ancilla"))};
  }
  bad("attack must be \"none\", \"intercept_resend\" or {\"entangle_ancilla\": {...}}");
}

ordered_json attack_to_json(const AttackStrategy& attack) {
  if (const auto* ea = std::get_if<EntangleAncilla>(&attack)) {
    ordered_json out;
    out["entangle_ancilla"] = to_json(ea->phi);
    return out;
  }
  return std::string(attack_name(attack));
}

ExperimentSpec parse_experiment(const json& doc) {
  if (!doc.is_object()) bad("config must be a JSON object");
  if (!doc.contains("experiment")) bad("config needs an 'experiment' field");
  return parse_experiment(doc, experiment_kind_from_string(
                                   as_string(doc.at("experiment"), "experiment")));
}

ExperimentSpec parse_experiment(const json& doc, ExperimentKind kind) {
  if (!doc.is_object()) bad("config must be a JSON object");
  reject_unknown(doc,
                 {"experiment", "seed", "trials", "session", "attack", "s_values",
                  "role", "phi_source", "phi_file", "draws", "output", "transcript"},
                 "config");
  ExperimentSpec spec;
  spec.kind = kind;
  spec.seed = doc.contains("seed") ? as_uint(doc.at("seed"), "seed") : default_seed();
  spec.trials = doc.contains("trials") ? as_uint(doc.at("trials"), "trials")
                                       : default_trials(kind);
  if (doc.contains("session")) {
    const auto& s = doc.at("session");
    if (!s.is_object()) bad("'session' must be an object");
    reject_unknown(s, {"n_pairs", "s_detect", "k_identify", "id_bits", "initial_id"},
                   "session");
    if (s.contains("n_pairs")) spec.session.n_pairs = as_u32(s.at("n_pairs"), "n_pairs");
    if (s.contains("s_detect")) spec.session.s_detect = as_u32(s.at("s_detect"), "s_detect");
    if (s.contains("k_identify"))
      spec.session.k_identify = as_u32(s.at("k_identify"), "k_identify");
    if (s.contains("id_bits")) spec.session.id_bits = as_u32(s.at("id_bits"), "id_bits");
    if (s.contains("initial_id")) {
      try {
        IdString id{bits_from_string(as_string(s.at("initial_id"), "initial_id"))};
        if (!s.contains("id_bits")) spec.session.id_bits = static_cast<std::uint32_t>(id.size());
        spec.session.initial_id = std::move(id);
      } catch (const Error& e) {
        bad(std::string("initial_id: ") + e.what());
      }
    }
  }
  if (doc.contains("attack")) {
    try {
      spec.attack = parse_attack(doc.at("attack"));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigError) throw;
      bad(std::string("attack: ") + e.what());
    }
  }
  if (doc.contains("s_values")) {
    const auto& sv = doc.at("s_values");
    if (!sv.is_array()) bad("'s_values' must be an array");
    spec.s_values.clear();
    for (const auto& s : sv) spec.s_values.push_back(as_u32(s, "s_values[]"));
  }
  if (doc.contains("role")) {
    const auto r = as_string(doc.at("role"), "role");
    if (r == "as_alice") spec.role = Impersonation::EveAsAlice;
    else if (r == "as_bob") spec.role = Impersonation::EveAsBob;
    else bad("role must be 'as_alice' or 'as_bob'");
  }
  if (doc.contains("phi_source")) {
    const auto s = as_string(doc.at("phi_source"), "phi_source");
    if (s == "random") spec.phi_source = PhiSource::Random;
    else if (s == "corner") spec.phi_source = PhiSource::Corner;
    else if (s == "file") spec.phi_source = PhiSource::File;
    else bad("phi_source must be 'random', 'corner' or 'file'");
  }
  if (doc.contains("phi_file")) spec.phi_file = as_string(doc.at("phi_file"), "phi_file");
  if (doc.contains("draws")) spec.draws = as_uint(doc.at("draws"), "draws");
  if (doc.contains("output")) spec.output_path = as_string(doc.at("output"), "output");
  if (doc.contains("transcript"))
    spec.transcript_path = as_string(doc.at("transcript"), "transcript");
  spec.validate();
  return spec;
}

ordered_json to_json(const ExperimentSpec& spec) {
  ordered_json out;
  out["experiment"] = std::string(to_string(spec.kind));
  out["seed"] = spec.seed;
  out["trials"] = spec.trials;
  ordered_json s;
  s["n_pairs"] = spec.session.n_pairs;
  s["s_detect"] = spec.session.s_detect;
  s["k_identify"] = spec.session.k_identify;
  s["id_bits"] = spec.session.id_bits;
  if (spec.session.initial_id) s["initial_id"] = bits_to_string(spec.session.initial_id->bits);
  out["session"] = std::move(s);
  out["attack"] = attack_to_json(spec.attack);
  switch (spec.kind) {
    case ExperimentKind::DetectionCurve:
      out["s_values"] = spec.s_values;
      break;
    case ExperimentKind::ImpersonationTrials:
      out["role"] = std::string(role_name(spec.role));
      break;
    case ExperimentKind::AnalyzerCheck:
      out["phi_source"] = std::string(phi_source_name(spec.phi_source));
      if (spec.phi_source == PhiSource::File) out["phi_file"] = spec.phi_file;
      if (spec.phi_source == PhiSource::Random) out["draws"] = spec.draws;
      break;
    default:
      break;
  }
  return out;
}

std::vector<TripartiteState> load_states(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, path + ": " + e.what());
  }
  std::vector<TripartiteState> out;
  if (doc.is_array()) {
    for (const auto& item : doc) out.push_back(parse_tripartite(item));
  } else {
    out.push_back(parse_tripartite(doc));
  }
  if (out.empty()) fail(ErrorCode::ParseError, path + " holds no states");
  return out;
}

SessionConfig session_for_trial(const ExperimentSpec& spec, std::uint64_t trial) {
  SessionConfig c;
  c.n_pairs = spec.session.n_pairs;
  c.s_detect = spec.session.s_detect;
  c.k_identify = spec.session.k_identify;
  c.seed = derive_seed(spec.seed, trial);
  c.attack = spec.attack;
  if (spec.kind == ExperimentKind::ImpersonationTrials) c.impersonation = spec.role;
  if (spec.session.initial_id) {
    c.initial_id = *spec.session.initial_id;
  } else {
    // Separate stream so the ID does not share draws with the session.
    Rng id_rng(derive_seed(c.seed, 0x1D));
    c.initial_id.bits.resize(spec.session.id_bits);
    for (auto& b : c.initial_id.bits) b = static_cast<std::uint8_t>(id_rng.below(2));
  }
  return c;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << text;
  if (!out) fail(ErrorCode::IoError, "write to " + path + " failed");
}

}  // namespace swapqkd

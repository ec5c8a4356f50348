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
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "swapqkd/adversary.hpp"
#include "swapqkd/protocol.hpp"

namespace swapqkd {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ExperimentKind {
  SingleSession,
  DetectionCurve,
  ImpersonationTrials,
  EsDistribution,
  AnalyzerCheck,
};

/// CLI / config names: session, detection-curve, impersonation, es-dist, analyze.
std::string_view to_string(ExperimentKind k) noexcept;
ExperimentKind experiment_kind_from_string(std::string_view name);

enum class PhiSource { Random, Corner, File };

struct SessionSettings {
  std::uint32_t n_pairs = 1024;
  std::uint32_t s_detect = 4;
  std::uint32_t k_identify = 3;
  std::uint32_t id_bits = kDefaultIdBits;
  /// Drawn per trial from the trial seed when absent.
  std::optional<IdString> initial_id;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::SingleSession;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1;
  SessionSettings session;
  AttackStrategy attack = NoAttack{};
  std::vector<std::uint32_t> s_values = {1, 2, 3, 4};
  Impersonation role = Impersonation::EveAsAlice;
  PhiSource phi_source = PhiSource::Random;
  std::string phi_file;
  std::uint64_t draws = 1000;
  /// Where the CLI writes the report; empty means stdout.
  std::string output_path;
  /// Single sessions only: JSON-lines transcript destination.
  std::string transcript_path;

  /// Throws ConfigError.
  void validate() const;
};

/// Seed used when neither the config nor a flag gives one. Reads
/// SWAPQKD_SEED, falling back to 1.
std::uint64_t default_seed();

/// Schema-checked parse of a config document. Unknown keys are errors.
ExperimentSpec parse_experiment(const nlohmann::json& doc);
/// Like parse_experiment, but `kind` wins over the document's "experiment".
ExperimentSpec parse_experiment(const nlohmann::json& doc, ExperimentKind kind);
/// The effective configuration, enough to reproduce a run.
nlohmann::ordered_json to_json(const ExperimentSpec& spec);

/// {"ancilla_dim": d, "amplitudes": [[re, im], ...]} in A (x) B (x) E order.
TripartiteState parse_tripartite(const nlohmann::json& j);
nlohmann::ordered_json to_json(const TripartiteState& phi);
/// "none" | "intercept_resend" | {"entangle_ancilla": {...}}
AttackStrategy parse_attack(const nlohmann::json& j);
nlohmann::ordered_json attack_to_json(const AttackStrategy& attack);

/// Reads a file holding one state object or an array of them.
std::vector<TripartiteState> load_states(const std::string& path);

/// The session a given trial of an experiment runs.
SessionConfig session_for_trial(const ExperimentSpec& spec, std::uint64_t trial);

struct Report {
  nlohmann::ordered_json document;
  bool passed = false;
  /// JSON lines, single sessions only.
  std::string transcript_jsonl;

  std::string dump() const { return document.dump(2) + "\n"; }
};

/// Wilson score interval at 95%.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials);

Report run_experiment(const ExperimentSpec& spec);

Report run_single_session(const ExperimentSpec& spec);
Report run_detection_curve(const ExperimentSpec& spec);
Report run_es_distribution(const ExperimentSpec& spec);
Report run_impersonation_trials(const ExperimentSpec& spec);
Report run_analyzer_check(const ExperimentSpec& spec);

/// Writes text to a file, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace swapqkd

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

// swapqkd command-line driver. Talks to the simulator only through the C API.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "swapqkd/swapqkd.h"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string out;
  std::string transcript;
  std::string attack;
  std::optional<std::uint32_t> n_pairs;
  std::optional<std::uint32_t> s_detect;
  std::optional<std::uint32_t> k_identify;
  std::optional<std::uint32_t> id_bits;
  std::vector<std::uint32_t> s_values;
  std::string role;
  std::string source;
  std::string phi;
  std::optional<std::uint64_t> draws;
};

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void ok_or_throw(swq_status st) {
  if (st != SWQ_OK) throw CliError(swq_last_error());
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

void set(swq_experiment* exp, const char* key, const std::string& json_value) {
  ok_or_throw(swq_experiment_set_option(exp, key, json_value.c_str()));
}

int execute(const std::optional<std::string>& kind, const Options& o) {
  swq_experiment* exp = nullptr;
  if (!o.config.empty()) {
    ok_or_throw(swq_experiment_load(o.config.c_str(), &exp));
  } else {
    ok_or_throw(swq_experiment_create("{}", &exp));
  }
  std::unique_ptr<swq_experiment, void (*)(swq_experiment*)> guard(exp, swq_experiment_destroy);

  if (kind) ok_or_throw(swq_experiment_set_kind(exp, kind->c_str()));
  if (!o.attack.empty()) set(exp, "attack", quoted(o.attack));
  if (o.n_pairs) set(exp, "session.n_pairs", std::to_string(*o.n_pairs));
  if (o.s_detect) set(exp, "session.s_detect", std::to_string(*o.s_detect));
  if (o.k_identify) set(exp, "session.k_identify", std::to_string(*o.k_identify));
  if (o.id_bits) set(exp, "session.id_bits", std::to_string(*o.id_bits));
  if (!o.s_values.empty()) {
    std::string list = "[";
    for (std::size_t i = 0; i < o.s_values.size(); ++i) {
      list += (i ? "," : "") + std::to_string(o.s_values[i]);
    }
    set(exp, "s_values", list + "]");
  }
  if (!o.role.empty()) set(exp, "role", quoted("as_" + o.role));
  if (!o.phi.empty()) {
    set(exp, "phi_file", quoted(o.phi));
    if (o.source.empty()) set(exp, "phi_source", quoted("file"));
  }
  if (!o.source.empty()) set(exp, "phi_source", quoted(o.source));
  if (o.draws) set(exp, "draws", std::to_string(*o.draws));
  if (o.seed) ok_or_throw(swq_experiment_set_seed(exp, *o.seed));
  if (o.trials) ok_or_throw(swq_experiment_set_trials(exp, *o.trials));

  swq_report* report = nullptr;
  ok_or_throw(swq_experiment_run(exp, &report));
  std::unique_ptr<swq_report, void (*)(swq_report*)> report_guard(report, swq_report_destroy);

  std::string out = o.out.empty() ? swq_report_output_path(report) : o.out;
  if (out.empty()) {
    std::cout << swq_report_json(report);
  } else {
    ok_or_throw(swq_report_write(report, out.c_str()));
  }
  std::string transcript_path =
      o.transcript.empty() ? swq_report_transcript_path(report) : o.transcript;
  if (!transcript_path.empty()) {
    std::FILE* f = std::fopen(transcript_path.c_str(), "wb");
    if (!f) throw CliError("cannot open " + transcript_path);
    const std::string text = swq_report_transcript(report);
    const bool good = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    std::fclose(f);
    if (!good) throw CliError("write to " + transcript_path + " failed");
  }
  return swq_report_passed(report) ? 0 : 1;
}

void common_flags(CLI::App* cmd, Options& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "JSON config file");
  if (config_required) c->required();
  c->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Master seed (default: config, then $SWAPQKD_SEED, then 1)");
  cmd->add_option("--trials", o.trials, "Number of trials");
  cmd->add_option("--out", o.out, "Write the JSON report here instead of stdout");
}

void session_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--attack", o.attack, "none | intercept_resend")
      ->check(CLI::IsMember({"none", "intercept_resend"}));
  cmd->add_option("--n-pairs", o.n_pairs, "EPR pairs per session");
  cmd->add_option("--s", o.s_detect, "Pairs checked for eavesdropping");
  cmd->add_option("--k", o.k_identify, "Pairs in each identification subset");
  cmd->add_option("--id-bits", o.id_bits, "Length of the generated ID");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-swapping QKD and identification simulator"};
  app.set_version_flag("--version", swq_version());
  app.require_subcommand(1);

  Options o;
  std::optional<std::string> kind;

  auto* run = app.add_subcommand("run", "Run the experiment named in a config file");
  common_flags(run, o, true);

  auto* session = app.add_subcommand("session", "One protocol session");
  common_flags(session, o, false);
  session_flags(session, o);
  session->add_option("--transcript", o.transcript, "Write the JSON-lines transcript here");

  auto* curve = app.add_subcommand("detection-curve", "Step-2 pass rate against s");
  common_flags(curve, o, false);
  session_flags(curve, o);
  curve->add_option("--s-values", o.s_values, "Values of s")->delimiter(',');

  auto* es = app.add_subcommand("es-dist", "Entanglement-swapping outcome statistics");
  common_flags(es, o, false);

  auto* imp = app.add_subcommand("impersonation", "Acceptance rate of an ID-less impostor");
  common_flags(imp, o, false);
  session_flags(imp, o);
  imp->add_option("--role", o.role, "Who Eve pretends to be")
      ->check(CLI::IsMember({"alice", "bob"}));

  auto* analyze = app.add_subcommand("analyze", "Check ancilla states against the zero-error theorem");
  common_flags(analyze, o, false);
  analyze->add_option("--source", o.source, "random | corner | file")
      ->check(CLI::IsMember({"random", "corner", "file"}));
  analyze->add_option("--phi", o.phi, "JSON file with one state or an array of states")
      ->check(CLI::ExistingFile);
  analyze->add_option("--draws", o.draws, "Number of Haar-random states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto* sub : {session, curve, es, imp, analyze}) {
    if (sub->parsed()) kind = sub->get_name();
  }
  try {
    return execute(kind, o);
  } catch (const CliError& e) {
    std::cerr << "swapqkd: " << e.what() << "\n";
    return 2;
  }
}

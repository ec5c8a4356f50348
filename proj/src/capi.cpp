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

#include "swapqkd/swapqkd.h"

#include <filesystem>
#include <fstream>
#include <new>
#include <string>

#include "swapqkd/errors.hpp"
#include "swapqkd/harness.hpp"

using nlohmann::json;

struct swq_experiment {
  json document = json::object();
  std::optional<swapqkd::ExperimentKind> kind;
  std::string config_text;
};

struct swq_report {
  swapqkd::Report report;
  std::string text;
  std::string output_path;
  std::string transcript_path;
};

namespace {

thread_local std::string g_last_error;

swq_status status_of(swapqkd::ErrorCode code) {
  using swapqkd::ErrorCode;
  switch (code) {
    case ErrorCode::ConfigError: return SWQ_ERR_CONFIG;
    case ErrorCode::ParseError: return SWQ_ERR_PARSE;
    case ErrorCode::IoError: return SWQ_ERR_IO;
    case ErrorCode::InvalidState:
    case ErrorCode::InvalidParticleSet:
    case ErrorCode::ParticleNotFound: return SWQ_ERR_INVALID_STATE;
    case ErrorCode::ProtocolViolation:
    case ErrorCode::EmptyKey: return SWQ_ERR_PROTOCOL;
    case ErrorCode::InsufficientKeyMaterial: return SWQ_ERR_KEY_MATERIAL;
    case ErrorCode::KeyReuseViolation: return SWQ_ERR_KEY_REUSE;
    case ErrorCode::InvariantViolation: return SWQ_ERR_INTERNAL;
  }
  return SWQ_ERR_INTERNAL;
}

template <typename F>
swq_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SWQ_OK;
  } catch (const swapqkd::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return SWQ_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SWQ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SWQ_ERR_INTERNAL;
  }
}

swq_status invalid(const char* what) {
  g_last_error = what;
  return SWQ_ERR_INVALID_ARGUMENT;
}

swapqkd::ExperimentSpec spec_of(const swq_experiment& exp) {
  if (exp.kind) return swapqkd::parse_experiment(exp.document, *exp.kind);
  return swapqkd::parse_experiment(exp.document);
}

// Parses and validates eagerly so bad input fails at the call that caused it.
void check(const swq_experiment& exp) {
  if (exp.kind || exp.document.contains("experiment")) (void)spec_of(exp);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    swapqkd::fail(swapqkd::ErrorCode::ParseError, e.what());
  }
}

}  // namespace

extern "C" {

const char* swq_version(void) { return swapqkd::kVersion.data(); }

const char* swq_last_error(void) { return g_last_error.c_str(); }

swq_status swq_experiment_create(const char* config_json, swq_experiment** out) {
  if (!config_json || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto exp = std::make_unique<swq_experiment>();
    exp->document = parse_document(config_json);
    if (!exp->document.is_object()) {
      swapqkd::fail(swapqkd::ErrorCode::ConfigError, "config must be a JSON object");
    }
    check(*exp);
    *out = exp.release();
  });
}

swq_status swq_experiment_load(const char* path, swq_experiment** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path);
    if (!in) swapqkd::fail(swapqkd::ErrorCode::IoError, std::string("cannot open ") + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto exp = std::make_unique<swq_experiment>();
    exp->document = parse_document(text);
    if (!exp->document.is_object()) {
      swapqkd::fail(swapqkd::ErrorCode::ConfigError, "config must be a JSON object");
    }
    // A relative phi_file is taken relative to the config file, not the cwd.
    auto phi = exp->document.find("phi_file");
    if (phi != exp->document.end() && phi->is_string()) {
      const std::filesystem::path file = phi->get<std::string>();
      if (file.is_relative()) *phi = (std::filesystem::path(path).parent_path() / file).string();
    }
    check(*exp);
    *out = exp.release();
  });
}

void swq_experiment_destroy(swq_experiment* exp) { delete exp; }

swq_status swq_experiment_set_kind(swq_experiment* exp, const char* kind) {
  if (!exp || !kind) return invalid("null argument");
  return guarded([&] {
    const auto previous = exp->kind;
    exp->kind = swapqkd::experiment_kind_from_string(kind);
    try {
      check(*exp);
    } catch (...) {
      exp->kind = previous;
      throw;
    }
  });
}

swq_status swq_experiment_set_option(swq_experiment* exp, const char* key,
                                     const char* json_value) {
  if (!exp || !key || !json_value) return invalid("null argument");
  return guarded([&] {
    const json value = parse_document(json_value);
    json updated = exp->document;
    json* node = &updated;
    std::string path = key;
    for (std::size_t dot; (dot = path.find('.')) != std::string::npos;) {
      const std::string head = path.substr(0, dot);
      path.erase(0, dot + 1);
      if (!node->contains(head)) (*node)[head] = json::object();
      node = &(*node)[head];
      if (!node->is_object()) {
        swapqkd::fail(swapqkd::ErrorCode::ConfigError, "'" + head + "' is not an object");
      }
    }
    (*node)[path] = value;
    swq_experiment trial{updated, exp->kind, {}};
    check(trial);
    exp->document = std::move(updated);
  });
}

swq_status swq_experiment_set_seed(swq_experiment* exp, uint64_t seed) {
  if (!exp) return invalid("null argument");
  return swq_experiment_set_option(exp, "seed", std::to_string(seed).c_str());
}

swq_status swq_experiment_set_trials(swq_experiment* exp, uint64_t trials) {
  if (!exp) return invalid("null argument");
  return swq_experiment_set_option(exp, "trials", std::to_string(trials).c_str());
}

swq_status swq_experiment_config_json(swq_experiment* exp, const char** out) {
  if (!exp || !out) return invalid("null argument");
  return guarded([&] {
    exp->config_text = swapqkd::to_json(spec_of(*exp)).dump(2);
    *out = exp->config_text.c_str();
  });
}

swq_status swq_experiment_run(const swq_experiment* exp, swq_report** out) {
  if (!exp || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const swapqkd::ExperimentSpec spec = spec_of(*exp);
    auto r = std::make_unique<swq_report>();
    r->report = swapqkd::run_experiment(spec);
    r->text = r->report.dump();
    r->output_path = spec.output_path;
    r->transcript_path = spec.transcript_path;
    *out = r.release();
  });
}

const char* swq_report_json(const swq_report* report) {
  return report ? report->text.c_str() : "";
}

int swq_report_passed(const swq_report* report) {
  return report && report->report.passed ? 1 : 0;
}

const char* swq_report_output_path(const swq_report* report) {
  return report ? report->output_path.c_str() : "";
}

const char* swq_report_transcript(const swq_report* report) {
  return report ? report->report.transcript_jsonl.c_str() : "";
}

const char* swq_report_transcript_path(const swq_report* report) {
  return report ? report->transcript_path.c_str() : "";
}

swq_status swq_report_write(const swq_report* report, const char* path) {
  if (!report || !path) return invalid("null argument");
  return guarded([&] { swapqkd::write_text_file(path, report->text); });
}

void swq_report_destroy(swq_report* report) { delete report; }

}  // extern "C"

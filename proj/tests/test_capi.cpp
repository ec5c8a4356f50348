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


// Exercises the shared library through its C surface only.

#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "swapqkd/swapqkd.h"

namespace {

struct Experiment {
  swq_experiment* handle = nullptr;
  ~Experiment() { swq_experiment_destroy(handle); }
};

struct Report {
  swq_report* handle = nullptr;
  ~Report() { swq_report_destroy(handle); }
};

std::string strip_timestamp(std::string text) {
  const auto at = text.find("\"generated_at\"");
  REQUIRE(at != std::string::npos);
  const auto end = text.find('\n', at);
  return text.erase(at, end - at);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version string") { CHECK(std::strcmp(swq_version(), "0.1.0") == 0); }

TEST_CASE("create, run and read a report") {
  Experiment exp;
  REQUIRE(swq_experiment_create(R"({"experiment": "es-dist", "trials": 1000})", &exp.handle) ==
          SWQ_OK);
  CHECK(swq_experiment_set_seed(exp.handle, 17) == SWQ_OK);
  const char* config = nullptr;
  REQUIRE(swq_experiment_config_json(exp.handle, &config) == SWQ_OK);
  CHECK(std::string(config).find("\"seed\": 17") != std::string::npos);

  Report rep;
  REQUIRE(swq_experiment_run(exp.handle, &rep.handle) == SWQ_OK);
  CHECK(swq_report_passed(rep.handle) == 1);
  const std::string json = swq_report_json(rep.handle);
  CHECK(json.find("\"experiment\": \"es-dist\"") != std::string::npos);
  CHECK(std::string(swq_report_transcript(rep.handle)).empty());
}

TEST_CASE("same seed, same report") {
  auto run = [](std::uint64_t seed) {
    Experiment exp;
    REQUIRE(swq_experiment_create(R"({"experiment": "session"})", &exp.handle) == SWQ_OK);
    REQUIRE(swq_experiment_set_seed(exp.handle, seed) == SWQ_OK);
    Report rep;
    REQUIRE(swq_experiment_run(exp.handle, &rep.handle) == SWQ_OK);
    return std::make_pair(strip_timestamp(swq_report_json(rep.handle)),
                          std::string(swq_report_transcript(rep.handle)));
  };
  const auto a = run(5), b = run(5), c = run(6);
  CHECK(a == b);
  CHECK(a.second != c.second);
  CHECK_FALSE(a.second.empty());
}

TEST_CASE("options and kinds") {
  Experiment exp;
  REQUIRE(swq_experiment_create("{}", &exp.handle) == SWQ_OK);
  CHECK(swq_experiment_set_kind(exp.handle, "impersonation") == SWQ_OK);
  CHECK(swq_experiment_set_option(exp.handle, "session.k_identify", "2") == SWQ_OK);
  CHECK(swq_experiment_set_option(exp.handle, "role", "\"as_bob\"") == SWQ_OK);
  CHECK(swq_experiment_set_trials(exp.handle, 40) == SWQ_OK);
  const char* config = nullptr;
  REQUIRE(swq_experiment_config_json(exp.handle, &config) == SWQ_OK);
  const std::string text = config;
  CHECK(text.find("\"k_identify\": 2") != std::string::npos);
  CHECK(text.find("\"as_bob\"") != std::string::npos);
  CHECK(text.find("\"trials\": 40") != std::string::npos);

  // Rejected values leave the handle unchanged.
  CHECK(swq_experiment_set_option(exp.handle, "session.k_identify", "0") == SWQ_ERR_CONFIG);
  CHECK(std::strlen(swq_last_error()) > 0);
  CHECK(swq_experiment_set_kind(exp.handle, "tea") == SWQ_ERR_CONFIG);
  REQUIRE(swq_experiment_config_json(exp.handle, &config) == SWQ_OK);
  CHECK(std::string(config).find("\"k_identify\": 2") != std::string::npos);
  CHECK(swq_experiment_set_option(exp.handle, "role.x", "1") == SWQ_ERR_CONFIG);

  Report rep;
  REQUIRE(swq_experiment_run(exp.handle, &rep.handle) == SWQ_OK);
  CHECK(swq_report_passed(rep.handle) == 1);
}

TEST_CASE("error codes") {
  swq_experiment* exp = nullptr;
  CHECK(swq_experiment_create("{not json", &exp) == SWQ_ERR_PARSE);
  CHECK(exp == nullptr);
  CHECK(swq_experiment_create("[]", &exp) == SWQ_ERR_CONFIG);
  CHECK(swq_experiment_create(R"({"experiment": "session", "extra": 1})", &exp) == SWQ_ERR_CONFIG);
  CHECK(std::string(swq_last_error()).find("extra") != std::string::npos);
  CHECK(swq_experiment_create(nullptr, &exp) == SWQ_ERR_INVALID_ARGUMENT);
  CHECK(swq_experiment_create("{}", nullptr) == SWQ_ERR_INVALID_ARGUMENT);
  CHECK(swq_experiment_load("/nonexistent/config.json", &exp) == SWQ_ERR_IO);
  CHECK(swq_experiment_set_seed(nullptr, 1) == SWQ_ERR_INVALID_ARGUMENT);
  CHECK(swq_experiment_run(nullptr, nullptr) == SWQ_ERR_INVALID_ARGUMENT);
  CHECK(swq_report_passed(nullptr) == 0);
  CHECK(std::string(swq_report_json(nullptr)).empty());
  swq_experiment_destroy(nullptr);
  swq_report_destroy(nullptr);

  Experiment bad_state;
  REQUIRE(swq_experiment_create(R"({"experiment": "analyze", "phi_source": "random"})",
                                &bad_state.handle) == SWQ_OK);
  CHECK(swq_experiment_set_option(bad_state.handle, "attack",
                                  R"({"entangle_ancilla": {"amplitudes": [[1,0],[1,0],[0,0],[0,0]]}})") ==
        SWQ_ERR_CONFIG);

  Experiment no_kind;
  REQUIRE(swq_experiment_create("{}", &no_kind.handle) == SWQ_OK);
  swq_report* rep = nullptr;
  CHECK(swq_experiment_run(no_kind.handle, &rep) == SWQ_ERR_CONFIG);
  CHECK(rep == nullptr);
}

TEST_CASE("load from file and write the report") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto cfg = dir / "swapqkd_capi_cfg.json";
  std::ofstream(cfg) << R"({"experiment": "analyze", "phi_source": "corner",
                           "output": "somewhere.json"})";
  Experiment exp;
  REQUIRE(swq_experiment_load(cfg.c_str(), &exp.handle) == SWQ_OK);
  Report rep;
  REQUIRE(swq_experiment_run(exp.handle, &rep.handle) == SWQ_OK);
  CHECK(std::string(swq_report_output_path(rep.handle)) == "somewhere.json");
  const auto out = dir / "swapqkd_capi_report.json";
  REQUIRE(swq_report_write(rep.handle, out.c_str()) == SWQ_OK);
  CHECK(slurp(out) == swq_report_json(rep.handle));
  CHECK(swq_report_write(rep.handle, "/nonexistent/dir/r.json") == SWQ_ERR_IO);
}

// Copyright 2026 The sol Authors.
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

// Command-line front end: run, sweep, verify, fit.
//
// Exit codes: 0 ok, 1 config or input error, 2 verification failure or
// protocol violation, 3 capacity abort.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sol/config.hpp"
#include "sol/errors.hpp"
#include "sol/experiment.hpp"
#include "sol/verify_suite.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kVerifyFailure = 2;
constexpr int kCapacityAbort = 3;

// --out beats SOL_OUT_DIR, which beats the config file.
std::string output_dir(const std::string& flag, const std::string& from_config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SOL_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return from_config;
}

int report_experiment(const sol::ExperimentConfig& config, const sol::ExperimentResult& result,
                      const std::string& dir) {
  const std::string path = sol::write_outputs(config, result, dir);
  for (const auto& r : result.rows) {
    if (r.seed != "aggregate") continue;
    std::printf("%s T=%lld sigma=%g mean_regret=%.6g stderr=%.3g\n", r.learner.c_str(),
                static_cast<long long>(r.T), r.sigma, r.regret, r.regret_stderr);
  }
  std::printf("wrote %s\n", path.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oracle-efficient online learning laboratory"};
  app.require_subcommand(1);

  std::string config_path, csv_path, suite = "all", out;
  std::uint64_t seed_base = 0;
  int jobs = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed-base", seed_base, "Offset added to every seed");
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "Output directory");
  };

  auto* run = app.add_subcommand("run", "Play every seed of one experiment");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_common(run);
  auto* sweep = app.add_subcommand("sweep", "Play the config's grid over T, sigma, K, n");
  sweep->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_common(sweep);
  auto* verify = app.add_subcommand("verify", "Run the numerical lemma checks");
  verify->add_option("--suite", suite, "Suite name or 'all'");
  add_common(verify);
  auto* fit = app.add_subcommand("fit", "Fit regret ~ T^alpha from an experiment CSV");
  fit->add_option("csv", csv_path, "Experiment CSV")->required();
  fit->add_option("--out", out, "Also write the fit JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigFailure;
  }

  try {
    if (*run || *sweep) {
      const auto config = sol::load_config(config_path);
      const sol::RunOptions options{jobs, seed_base};
      const auto result = *run ? sol::run_experiment(config, options)
                               : sol::run_sweep(config, options);
      return report_experiment(config, result, output_dir(out, config.out));
    }
    if (*verify) {
      sol::SuiteOptions options;
      options.seed += seed_base;
      options.jobs = jobs;
      const auto reports = sol::run_suite(suite, options);
      nlohmann::json doc = nlohmann::json::array();
      bool ok = true;
      for (const auto& r : reports) {
        doc.push_back(sol::to_json(r));
        ok = ok && r.passed;
        std::fprintf(stderr, "%-36s %s\n", r.name.c_str(), r.passed ? "pass" : "FAIL");
      }
      std::cout << doc.dump(2) << '\n';
      const std::string dir = output_dir(out, "");
      if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        std::ofstream(std::filesystem::path(dir) / "verify_report.json") << doc.dump(2) << '\n';
      }
      return ok ? kOk : kVerifyFailure;
    }
    if (*fit) {
      std::ifstream in(csv_path);
      if (!in) throw sol::InputError("cannot open " + csv_path);
      std::stringstream text;
      text << in.rdbuf();
      const auto rows = sol::rows_from_csv(text.str());
      const auto doc = sol::fit_rows(rows);
      for (const auto& g : doc) {
        for (const auto& w : g["warnings"]) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
      }
      std::cout << doc.dump(2) << '\n';
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        std::ofstream(std::filesystem::path(out) / "fit.json") << doc.dump(2) << '\n';
      }
      return kOk;
    }
  } catch (const sol::CapacityError& e) {
    std::fprintf(stderr, "capacity abort: %s\n", e.what());
    return kCapacityAbort;
  } catch (const sol::ContractViolation& e) {
    std::fprintf(stderr, "protocol violation: %s\n", e.what());
    return kVerifyFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigFailure;
  }
  return kOk;
}

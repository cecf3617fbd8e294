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

#ifndef SOL_EXPERIMENT_HPP_
#define SOL_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sol/config.hpp"
#include "sol/transcript.hpp"

namespace sol {

// One CSV line. `seed` is the decimal seed or "aggregate".
struct ResultRow {
  std::string experiment_id;
  std::string learner;
  std::string adversary;
  std::string cls;
  Index T = 0;
  double sigma = 1.0;
  std::optional<Index> K;   // blank unless the learner uses hints
  int d = 1;
  std::optional<double> n;  // blank unless the learner is alg2
  double c_K = 0.0;
  std::string tie_policy;
  std::string seed;
  double regret = 0.0;
  double total_loss = 0.0;
  double bih_loss = 0.0;
  double oracle_calls = 0.0;
  double mean_input_len = 0.0;
  double wall_ms = 0.0;
  double regret_stderr = 0.0;  // aggregate rows only
};

struct RunOptions {
  int jobs = 1;
  std::uint64_t seed_base = 0;  // added to every configured seed
};

struct ExperimentResult {
  std::vector<ResultRow> rows;          // data rows sorted by seed, then the aggregate
  std::vector<Transcript> transcripts;  // same order as the data rows
  std::vector<std::uint64_t> runs;      // run id of each transcript
};

/// Plays every seed (concurrently with `jobs` threads) and assembles the rows
/// after all runs finish, so the output does not depend on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {},
                                std::uint64_t run = 0);

// Cartesian product T x sigma x K x n, T slowest.
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& config);

// Grid point i is played as run i; rows are concatenated in grid order.
ExperimentResult run_sweep(const ExperimentConfig& config, const RunOptions& options = {});

ResultRow aggregate_row(std::span<const ResultRow> rows);

extern const std::vector<std::string> kCsvColumns;
std::string rows_to_csv(std::span<const ResultRow> rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);

// Writes <out>/<experiment_id>.csv and, when enabled, one JSON and one CSV
// transcript per run under <out>/<experiment_id>/. Returns the CSV path.
std::string write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                          const std::string& out_dir);

struct ScalingFit {
  double alpha = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<std::pair<double, double>> points;  // (T, mean regret) used
  std::vector<std::string> warnings;
};

/// Least squares of ln(mean regret) on ln T, means taken per distinct T.
/// T values whose mean regret is not positive are dropped with a warning.
/// Fewer than 3 usable T values throws InputError.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> T_regret);

// fit_scaling per group of data rows sharing everything but T, K, n, seed.
nlohmann::json fit_rows(std::span<const ResultRow> rows);

}  // namespace sol

#endif  // SOL_EXPERIMENT_HPP_

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

#ifndef SOL_CONFIG_HPP_
#define SOL_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sol/adversary.hpp"
#include "sol/core.hpp"
#include "sol/game.hpp"
#include "sol/learner.hpp"

namespace sol {

inline constexpr int kConfigSchema = 1;

struct ClassConfig {
  std::string kind = "partition";  // partition | shatter | custom
  Index domain = 16;
  std::optional<int> d;         // partition blocks; defaults to the experiment d
  Index support = 0;            // partition: blocks cover the first `support` points
  std::vector<Index> special;   // shatter
  nlohmann::json custom;        // custom: class_to_json document
};

// Values to sweep over; an empty list keeps the base value.
struct SweepGrid {
  std::vector<Index> T;
  std::vector<double> sigma;
  std::vector<Index> K;
  std::vector<double> n;
};

/// One experiment. Learner- and adversary-specific options live in the two
/// specs; the shared parameters (T, σ, K, d, n, c_K, tie, loss) are kept at
/// the top level and pushed into both specs by make_game_setup.
struct ExperimentConfig {
  int schema = kConfigSchema;
  std::string experiment_id = "experiment";
  ClassConfig cls;
  LearnerSpec learner;
  bool doubling_range = false;  // sigma_min/sigma_max given; else both are σ
  AdversarySpec adversary;
  Index T = 1;
  double sigma = 1.0;
  std::optional<Index> K;
  int d = 1;
  std::optional<double> n;
  double c_K = kDefaultHintConstant;
  TiePolicy tie = TiePolicy::kLowestIndex;
  LossSpec loss = LossSpec::binary_indicator();
  std::vector<std::uint64_t> seeds;
  std::string out = "results";
  bool record_timing = false;
  bool transcripts = false;
  SweepGrid sweep;
};

// Parses and validates; unknown keys or inconsistent fields throw ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

// FNV-1a of the canonical JSON dump (output settings excluded).
std::uint64_t config_hash(const ExperimentConfig& config);

HypothesisClass build_class(const ExperimentConfig& config);

// `cls` must outlive the returned setup.
GameSetup make_game_setup(const ExperimentConfig& config, const HypothesisClass& cls,
                          std::uint64_t seed, std::uint64_t run);

// Cross-field checks, including a dry construction of adversary and learner.
void validate_config(const ExperimentConfig& config);

// Short class label for CSV rows, e.g. "partition:64:2:16".
std::string class_label(const ExperimentConfig& config);

}  // namespace sol

#endif  // SOL_CONFIG_HPP_

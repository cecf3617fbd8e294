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

#ifndef SOL_TRANSCRIPT_HPP_
#define SOL_TRANSCRIPT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sol/oracle.hpp"

namespace sol {

struct RoundRecord {
  Index t = 0;  // 1-based
  Index x = 0;
  double prediction = 0.0;
  double label = 0.0;
  double loss = 0.0;
  std::int64_t oracle_calls = 0;
  std::int64_t input_length = 0;
  // FNV-1a of (t, x, label) taken before the learner is asked to predict.
  std::uint64_t commitment = 0;
  std::int64_t wall_ns = 0;
};

struct Transcript {
  std::vector<RoundRecord> rounds;
  double total_loss = 0.0;
  double bih_loss = 0.0;
  Index bih_hypothesis = 0;
  double regret = 0.0;
  OracleStats learner_stats;
  OracleStats final_stats;  // the tagged best-in-hindsight call
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

std::uint64_t label_commitment(Index t, Index x, double label);

// wall_ns is written only when `with_timing` is set so that replays compare
// byte for byte.
nlohmann::json transcript_to_json(const Transcript& tr, bool with_timing);
std::string transcript_to_csv(const Transcript& tr, bool with_timing);

}  // namespace sol

#endif  // SOL_TRANSCRIPT_HPP_

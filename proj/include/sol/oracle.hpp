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

#ifndef SOL_ORACLE_HPP_
#define SOL_ORACLE_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "sol/core.hpp"
#include "sol/rng.hpp"

namespace sol {

// Objectives within this distance of the minimum count as tied.
inline constexpr double kTieTolerance = 1e-9;

/// Call and input-length accounting for one run. Input length is the
/// logical multiset size, so two copies of a hint count twice.
struct OracleStats {
  std::int64_t call_count = 0;
  std::int64_t total_input_length = 0;
  std::int64_t max_input_length = 0;

  void record(std::int64_t input_length);
  friend bool operator==(const OracleStats&, const OracleStats&) = default;
};

enum class TiePolicy { kLowestIndex, kPreferNegative, kSeededRandom };

TiePolicy tie_policy_from_name(const std::string& name);
std::string to_string(TiePolicy policy);

// kPreferNegative picks a minimizer with h(query) = -1 when one exists;
// kSeededRandom draws uniformly among minimizers from `rng`.
struct TieBreak {
  TiePolicy policy = TiePolicy::kLowestIndex;
  std::optional<Index> query;
  Rng* rng = nullptr;
};

struct OracleResult {
  Index hypothesis = 0;
  double value = 0.0;
};

// Σ count·l(h(x), y) for every hypothesis, no accounting.
Eigen::VectorXd erm_objective(const HypothesisClass& cls,
                              const ExampleMultiset& examples,
                              const LossSpec& loss);

// Σ_real l(h(x),y)/(2G) + Σ_bin -y·h(x)/2 for every hypothesis.
Eigen::VectorXd mixed_objective(const HypothesisClass& cls,
                                const ExampleMultiset& real_examples,
                                const ExampleMultiset& binary_examples,
                                const LossSpec& loss);

// Minimizer of `objective` under the tie policy.
OracleResult select_minimizer(const HypothesisClass& cls,
                              const Eigen::Ref<const Eigen::VectorXd>& objective,
                              const TieBreak& tie);

/// The only path by which learners read the class. Every call records one
/// unit in the owned stats accumulator; the class must outlive the oracle.
class Oracle {
 public:
  explicit Oracle(const HypothesisClass& cls) : cls_(&cls) {}

  OracleResult erm(const ExampleMultiset& examples, const LossSpec& loss,
                   const TieBreak& tie = {});
  OracleResult mixed_opt(const ExampleMultiset& real_examples,
                         const ExampleMultiset& binary_examples,
                         const LossSpec& loss, const TieBreak& tie = {});
  // Returns the worst hypothesis whose objective is within eps_add of the
  // optimum, ties drawn from `rng`.
  OracleResult approx_erm(const ExampleMultiset& examples, const LossSpec& loss,
                          double eps_add, Rng& rng);

  const HypothesisClass& hypothesis_class() const { return *cls_; }
  const OracleStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

 private:
  const HypothesisClass* cls_;
  OracleStats stats_;
};

}  // namespace sol

#endif  // SOL_ORACLE_HPP_

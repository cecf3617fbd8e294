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

#ifndef SOL_ADVERSARY_HPP_
#define SOL_ADVERSARY_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sol/core.hpp"
#include "sol/rng.hpp"
#include "sol/transcript.hpp"

namespace sol {

using IndexMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

/// T x K table of hint instances; row t-1 is Z_t.
class HintSchedule {
 public:
  HintSchedule() = default;
  explicit HintSchedule(IndexMatrix rows);

  Index rounds() const { return rows_.rows(); }
  Index width() const { return rows_.cols(); }
  const IndexMatrix& rows() const { return rows_; }
  // Z_t for 1-based t.
  auto row(Index t) const { return rows_.row(t - 1); }
  bool contains(Index t, Index x) const;

 private:
  IndexMatrix rows_;
};

enum class HintPattern { kTrueSequence, kCyclicBlocks, kWholeDomain };

// kTrueSequence needs `sequence` (K = 1); kCyclicBlocks cycles contiguous
// blocks of size K; kWholeDomain repeats 0..|X|-1 (K = |X|).
HintSchedule make_hint_schedule(HintPattern pattern, Index T, Index K,
                                Index domain_size,
                                const std::vector<Index>& sequence = {});

enum class AdversaryKind {
  kRealizableSmooth,
  kSupportAlternating,
  kWorstCaseSmallDomain,
  kTransductiveCyclic,
  kTransductiveSpecialPoint,
  kCustomTable,
};

AdversaryKind adversary_kind_from_name(const std::string& name);
std::string to_string(AdversaryKind kind);

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::kRealizableSmooth;
  double sigma = 1.0;        // support_alternating: |X0| = ceil(σ|X|)
  int d = 1;                 // blocks of X0 / special points
  double delta = 0.5;        // label agreement bias with h*
  Index K = 1;               // hint row width
  bool alternating = false;  // transductive_cyclic label mode
  IndexMatrix table_hints;   // custom_table
  std::vector<double> table_labels;
  std::vector<Index> table_instances;  // optional; else uniform in the row
};

/// y = h*(x) with probability 1/2 + δ, else -h*(x).
class BiasedLabelRule {
 public:
  BiasedLabelRule(Hypothesis target, double delta);
  double operator()(Index x, Rng& rng) const;
  const Hypothesis& target() const { return target_; }

 private:
  Hypothesis target_;
  double delta_;
};

// What the adversary commits to before the learner predicts: the round's
// distribution with its certificate, the sampled instance and its label.
struct RoundPlan {
  Eigen::VectorXd probs;
  double sigma = 1.0;  // smoothness certificate; unused when hinted
  bool hinted = false;
  Index x = 0;
  double y = 0.0;
};

// Throws ContractViolation when the plan breaks its certificate: for smooth
// rounds validate_smooth(probs, sigma) and probs(x) > 0, for hinted rounds
// supp(probs) and x inside Z_t.
void certify_round(const RoundPlan& plan, const HintSchedule* hints, Index t);

class Adversary {
 public:
  // Setup randomness (h*, tables) is drawn from `setup`.
  Adversary(AdversarySpec spec, const HypothesisClass& cls, Index T, Rng setup);

  RoundPlan next_round(Index t, const Transcript& prefix, Rng& rng);

  const HintSchedule* hints() const {
    return hints_ ? &*hints_ : nullptr;
  }
  const AdversarySpec& spec() const { return spec_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  // Size of the support X0 used by support_alternating.
  Index support_size() const { return support_size_; }
  std::optional<Index> target() const { return target_; }

 private:
  double alternate(Index block);

  AdversarySpec spec_;
  const HypothesisClass* cls_;
  Index T_;
  Index domain_size_;
  Index support_size_ = 0;
  std::optional<Index> target_;
  std::optional<BiasedLabelRule> rule_;
  std::optional<HintSchedule> hints_;
  std::vector<Index> parity_;
  std::vector<std::string> warnings_;
};

// Support size ceil(σ|X|) used by support_alternating, with the snap that
// treats σ|X| within 1e-9 of an integer as that integer.
Index support_alternating_size(Index domain_size, double sigma);

}  // namespace sol

#endif  // SOL_ADVERSARY_HPP_

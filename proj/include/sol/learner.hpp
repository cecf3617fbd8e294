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

#ifndef SOL_LEARNER_HPP_
#define SOL_LEARNER_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sol/adversary.hpp"
#include "sol/core.hpp"
#include "sol/oracle.hpp"
#include "sol/rng.hpp"

namespace sol {

inline constexpr double kDefaultHintConstant = 100.0;

// K = max(1, ceil(c_K ln T / σ)).
Index hint_count(Index T, double sigma, double c_K = kDefaultHintConstant);

// n = min(T/sqrt(σ), T sqrt(|X|/d)).
double default_n(Index T, double sigma, Index domain_size, int d);

// Appends `count` uniform instances with Rademacher labels, each with the
// given multiplicity.
void hallucinate(ExampleMultiset& out, Index domain_size, std::int64_t count,
                 std::int64_t multiplicity, Rng& rng);

/// mixed_opt(history; hints ∪ {(x,-1)}) - mixed_opt(history; hints ∪ {(x,+1)}).
/// `hints` already holds both copies of every Rademacher-labelled hint.
/// Two oracle calls. Round-off beyond [-1, 1] is clamped; anything larger
/// than 1e-9 throws ContractViolation.
double transductive_prediction(Oracle& oracle, const ExampleMultiset& history,
                               const ExampleMultiset& hints, Index x,
                               const LossSpec& loss, const TieBreak& tie = {});

enum class LearnerKind { kAlg1, kAlg2, kAlg3, kFtl, kHedge, kDoubling };

LearnerKind learner_kind_from_name(const std::string& name);
std::string to_string(LearnerKind kind);

struct LearnerSpec {
  LearnerKind kind = LearnerKind::kAlg2;
  LossSpec loss = LossSpec::binary_indicator();
  Index T = 1;
  double sigma = 1.0;
  double c_K = kDefaultHintConstant;
  std::optional<Index> K;     // Alg 1 override of hint_count
  std::optional<double> n;    // Alg 2 override of default_n
  TiePolicy tie = TiePolicy::kLowestIndex;
  std::int64_t max_hints_per_round = 0;  // 0 = unlimited
  std::optional<double> hedge_eta;
  // Doubling meta-learner.
  double sigma_min = 1.0;
  double sigma_max = 1.0;
  LearnerKind base = LearnerKind::kAlg2;
};

// Randomness for learner-owned streams: round t of stream `purpose` is keyed
// (seed, run, t, purpose), so no two rounds share a stream.
struct StreamBase {
  std::uint64_t seed = 0;
  std::uint64_t run = 0;
  std::uint64_t expert = 0;  // folded into the purpose tag; Purpose::kMeta
                             // is never used by experts

  Rng open(Index t, Purpose p) const {
    return Rng(key(t, p));
  }
  StreamKey key(Index t, Purpose p) const {
    return {seed, run, static_cast<std::uint64_t>(t), sub_purpose(p, expert)};
  }
};

class Learner {
 public:
  virtual ~Learner() = default;

  // t is 1-based; the learner has observed rounds 1..t-1.
  virtual double predict(Index t, Index x) = 0;
  virtual void observe(Index t, const LabeledExample& s) = 0;
  virtual OracleStats oracle_stats() const = 0;
  // Calls per round the algorithm promises (0 for Hedge).
  virtual std::int64_t calls_per_round() const = 0;

  // Every stream opened so far, in order.
  const std::vector<StreamKey>& stream_log() const { return stream_log_; }

 protected:
  Rng open_stream(const StreamBase& base, Index t, Purpose p) {
    stream_log_.push_back(base.key(t, p));
    return Rng(stream_log_.back());
  }

 private:
  std::vector<StreamKey> stream_log_;
};

/// Exponential weights kept in log space; probabilities ∝ exp(-η L_h).
class HedgeWeights {
 public:
  HedgeWeights(Index count, double eta);
  void update(const Eigen::Ref<const Eigen::VectorXd>& losses);
  Eigen::VectorXd probabilities() const;
  double eta() const { return eta_; }

 private:
  Eigen::VectorXd cumulative_;
  double eta_;
};

double default_hedge_eta(Index count, Index T);

// Each learner owns its oracle; `hints` is required by Alg 3 and must outlive
// the learner, as must `cls`.
std::unique_ptr<Learner> make_learner(const LearnerSpec& spec,
                                      const HypothesisClass& cls,
                                      const HintSchedule* hints,
                                      const StreamBase& streams);

// Number of experts max(1, ceil(log2(σ_max/σ_min))) with σ_i = 2^i σ_min.
std::vector<double> doubling_sigmas(double sigma_min, double sigma_max);

}  // namespace sol

#endif  // SOL_LEARNER_HPP_

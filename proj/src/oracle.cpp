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

#include "sol/oracle.hpp"

#include <algorithm>
#include <vector>

#include "sol/errors.hpp"

namespace sol {

void OracleStats::record(std::int64_t input_length) {
  ++call_count;
  total_input_length += input_length;
  max_input_length = std::max(max_input_length, input_length);
}

TiePolicy tie_policy_from_name(const std::string& name) {
  if (name == "lowest_index") return TiePolicy::kLowestIndex;
  if (name == "prefer_negative") return TiePolicy::kPreferNegative;
  if (name == "seeded_random") return TiePolicy::kSeededRandom;
  throw InputError("unknown tie policy: " + name);
}

std::string to_string(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::kLowestIndex: return "lowest_index";
    case TiePolicy::kPreferNegative: return "prefer_negative";
    case TiePolicy::kSeededRandom: return "seeded_random";
  }
  return "unknown";
}

namespace {

void check_examples(const HypothesisClass& cls, const ExampleMultiset& examples,
                    const LossSpec& loss) {
  if (loss.kind == LossKind::kBinaryIndicator && !cls.binary()) {
    throw InputError("binary_indicator loss needs a binary hypothesis class");
  }
  for (const auto& e : examples.entries()) {
    if (e.example.x < 0 || e.example.x >= cls.domain_size()) {
      throw InputError("example instance outside the domain");
    }
    check_label(loss, e.example.y);
  }
}

}  // namespace

Eigen::VectorXd erm_objective(const HypothesisClass& cls,
                              const ExampleMultiset& examples,
                              const LossSpec& loss) {
  check_examples(cls, examples, loss);
  Eigen::ArrayXd total = Eigen::ArrayXd::Zero(cls.size());
  for (const auto& e : examples.entries()) {
    total += static_cast<double>(e.count) *
             loss_column(loss, cls.values().col(e.example.x), e.example.y);
  }
  return total.matrix();
}

Eigen::VectorXd mixed_objective(const HypothesisClass& cls,
                                const ExampleMultiset& real_examples,
                                const ExampleMultiset& binary_examples,
                                const LossSpec& loss) {
  check_examples(cls, real_examples, loss);
  const LossSpec hint_loss = LossSpec::centered_binary();
  check_examples(cls, binary_examples, hint_loss);
  Eigen::VectorXd total = erm_objective(cls, real_examples, loss) /
                          (2.0 * loss.lipschitz_G);
  // -y·h(x)/2 summed per instance first: one column axpy per distinct x.
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(cls.domain_size());
  for (const auto& e : binary_examples.entries()) {
    weights(e.example.x) += static_cast<double>(e.count) * e.example.y;
  }
  total.noalias() -= 0.5 * (cls.values() * weights);
  return total;
}

OracleResult select_minimizer(const HypothesisClass& cls,
                              const Eigen::Ref<const Eigen::VectorXd>& objective,
                              const TieBreak& tie) {
  const double best = objective.minCoeff();
  std::vector<Index> minimizers;
  for (Index h = 0; h < objective.size(); ++h) {
    if (objective(h) <= best + kTieTolerance) minimizers.push_back(h);
  }
  Index chosen = minimizers.front();
  switch (tie.policy) {
    case TiePolicy::kLowestIndex:
      break;
    case TiePolicy::kPreferNegative:
      if (!cls.binary()) {
        throw InputError("prefer_negative tie policy needs a binary class");
      }
      if (tie.query) {
        for (Index h : minimizers) {
          if (cls(h, *tie.query) < 0.0) {
            chosen = h;
            break;
          }
        }
      }
      break;
    case TiePolicy::kSeededRandom:
      if (tie.rng == nullptr) {
        throw InputError("seeded_random tie policy needs an rng");
      }
      chosen = minimizers[static_cast<std::size_t>(
          tie.rng->uniform_index(static_cast<Index>(minimizers.size())))];
      break;
  }
  return {chosen, best};
}

OracleResult Oracle::erm(const ExampleMultiset& examples, const LossSpec& loss,
                         const TieBreak& tie) {
  const Eigen::VectorXd objective = erm_objective(*cls_, examples, loss);
  stats_.record(examples.logical_size());
  return select_minimizer(*cls_, objective, tie);
}

OracleResult Oracle::mixed_opt(const ExampleMultiset& real_examples,
                               const ExampleMultiset& binary_examples,
                               const LossSpec& loss, const TieBreak& tie) {
  const Eigen::VectorXd objective =
      mixed_objective(*cls_, real_examples, binary_examples, loss);
  stats_.record(real_examples.logical_size() + binary_examples.logical_size());
  return select_minimizer(*cls_, objective, tie);
}

OracleResult Oracle::approx_erm(const ExampleMultiset& examples,
                                const LossSpec& loss, double eps_add, Rng& rng) {
  if (!(eps_add >= 0.0)) throw InputError("approx_erm: eps_add must be >= 0");
  const Eigen::VectorXd objective = erm_objective(*cls_, examples, loss);
  stats_.record(examples.logical_size());
  if (eps_add == 0.0) return select_minimizer(*cls_, objective, {});
  const double limit = objective.minCoeff() + eps_add;
  double worst = -std::numeric_limits<double>::infinity();
  for (Index h = 0; h < objective.size(); ++h) {
    if (objective(h) <= limit) worst = std::max(worst, objective(h));
  }
  std::vector<Index> picks;
  for (Index h = 0; h < objective.size(); ++h) {
    if (objective(h) <= limit && objective(h) >= worst - kTieTolerance) {
      picks.push_back(h);
    }
  }
  const Index h = picks[static_cast<std::size_t>(
      rng.uniform_index(static_cast<Index>(picks.size())))];
  return {h, objective(h)};
}

}  // namespace sol

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

#include "sol/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "sol/errors.hpp"

namespace sol {

HintSchedule::HintSchedule(IndexMatrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw InputError("hint schedule needs T, K >= 1");
  }
}

bool HintSchedule::contains(Index t, Index x) const {
  const auto r = row(t);
  return std::find(r.begin(), r.end(), x) != r.end();
}

HintSchedule make_hint_schedule(HintPattern pattern, Index T, Index K,
                                Index domain_size,
                                const std::vector<Index>& sequence) {
  if (T < 1 || K < 1) throw InputError("hint schedule needs T, K >= 1");
  FiniteDomain domain(domain_size);
  IndexMatrix rows(T, K);
  switch (pattern) {
    case HintPattern::kTrueSequence:
      if (K != 1 || static_cast<Index>(sequence.size()) != T) {
        throw InputError("true-sequence hints need K = 1 and T instances");
      }
      for (Index t = 0; t < T; ++t) {
        if (sequence[t] < 0 || sequence[t] >= domain_size) {
          throw InputError("hint instance outside the domain");
        }
        rows(t, 0) = sequence[t];
      }
      break;
    case HintPattern::kCyclicBlocks: {
      if (domain_size % K != 0) {
        throw InputError("cyclic hints need K to divide the domain size");
      }
      const Index blocks = domain_size / K;
      for (Index t = 0; t < T; ++t) {
        for (Index k = 0; k < K; ++k) rows(t, k) = (t % blocks) * K + k;
      }
      break;
    }
    case HintPattern::kWholeDomain:
      if (K != domain_size) throw InputError("whole-domain hints need K = |X|");
      for (Index t = 0; t < T; ++t) {
        for (Index k = 0; k < K; ++k) rows(t, k) = k;
      }
      break;
  }
  return HintSchedule(std::move(rows));
}

AdversaryKind adversary_kind_from_name(const std::string& name) {
  if (name == "realizable_smooth") return AdversaryKind::kRealizableSmooth;
  if (name == "support_alternating") return AdversaryKind::kSupportAlternating;
  if (name == "worst_case_small_domain") {
    return AdversaryKind::kWorstCaseSmallDomain;
  }
  if (name == "transductive_cyclic") return AdversaryKind::kTransductiveCyclic;
  if (name == "transductive_special_point") {
    return AdversaryKind::kTransductiveSpecialPoint;
  }
  if (name == "custom_table") return AdversaryKind::kCustomTable;
  throw InputError("unknown adversary kind: " + name);
}

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::kRealizableSmooth: return "realizable_smooth";
    case AdversaryKind::kSupportAlternating: return "support_alternating";
    case AdversaryKind::kWorstCaseSmallDomain: return "worst_case_small_domain";
    case AdversaryKind::kTransductiveCyclic: return "transductive_cyclic";
    case AdversaryKind::kTransductiveSpecialPoint:
      return "transductive_special_point";
    case AdversaryKind::kCustomTable: return "custom_table";
  }
  return "unknown";
}

BiasedLabelRule::BiasedLabelRule(Hypothesis target, double delta)
    : target_(std::move(target)), delta_(delta) {
  if (!(delta >= 0.0 && delta <= 0.5)) {
    throw InputError("label bias delta must lie in [0, 1/2]");
  }
}

double BiasedLabelRule::operator()(Index x, Rng& rng) const {
  const double y = target_(x);
  // δ = 1/2 consumes no randomness, so realizable runs stay draw-free.
  if (delta_ == 0.5) return y;
  return rng.bernoulli(0.5 + delta_) ? y : -y;
}

Index support_alternating_size(Index domain_size, double sigma) {
  const double raw = sigma * static_cast<double>(domain_size);
  const double snapped = std::round(raw);
  if (std::abs(raw - snapped) < 1e-9) return static_cast<Index>(snapped);
  return static_cast<Index>(std::ceil(raw));
}

void certify_round(const RoundPlan& plan, const HintSchedule* hints, Index t) {
  const Index n = plan.probs.size();
  if (plan.x < 0 || plan.x >= n) {
    throw ContractViolation("round instance outside the domain");
  }
  if (plan.hinted) {
    if (hints == nullptr || t > hints->rounds()) {
      throw ContractViolation("hinted round without a hint row");
    }
    if (!hints->contains(t, plan.x)) {
      throw ContractViolation("x_t is not in Z_t at round " + std::to_string(t));
    }
    for (Index x = 0; x < n; ++x) {
      if (plan.probs(x) > 0.0 && !hints->contains(t, x)) {
        throw ContractViolation("distribution leaves Z_t at round " +
                                std::to_string(t));
      }
    }
    return;
  }
  bool smooth = false;
  try {
    smooth = validate_smooth(plan.probs, plan.sigma);
  } catch (const InputError& e) {
    throw ContractViolation(std::string("round distribution: ") + e.what());
  }
  if (!smooth) {
    throw ContractViolation("round distribution is not " +
                            std::to_string(plan.sigma) + "-smooth at round " +
                            std::to_string(t));
  }
  if (!(plan.probs(plan.x) > 0.0)) {
    throw ContractViolation("x_t has zero probability");
  }
}

Adversary::Adversary(AdversarySpec spec, const HypothesisClass& cls, Index T,
                     Rng setup)
    : spec_(std::move(spec)), cls_(&cls), T_(T), domain_size_(cls.domain_size()) {
  if (T < 0) throw InputError("T must be nonnegative");
  auto draw_target = [&] {
    target_ = setup.uniform_index(cls_->size());
    rule_.emplace(cls_->hypothesis(*target_), spec_.delta);
  };
  switch (spec_.kind) {
    case AdversaryKind::kRealizableSmooth:
      draw_target();
      break;
    case AdversaryKind::kSupportAlternating: {
      if (!(spec_.sigma > 0.0 && spec_.sigma <= 1.0)) {
        throw InputError("support_alternating needs sigma in (0, 1]");
      }
      support_size_ = support_alternating_size(domain_size_, spec_.sigma);
      if (static_cast<double>(support_size_) !=
          spec_.sigma * static_cast<double>(domain_size_)) {
        warnings_.push_back("sigma*|X| is not an integer; |X0| rounded up to " +
                            std::to_string(support_size_));
      }
      if (spec_.d < 1 || support_size_ % spec_.d != 0) {
        throw InputError("support_alternating needs d to divide |X0|");
      }
      parity_.assign(static_cast<std::size_t>(spec_.d), 0);
      break;
    }
    case AdversaryKind::kWorstCaseSmallDomain:
      break;
    case AdversaryKind::kTransductiveCyclic:
      if (T > 0) {
        hints_ = make_hint_schedule(HintPattern::kCyclicBlocks, T, spec_.K,
                                    domain_size_);
      }
      if (spec_.alternating) {
        parity_.assign(static_cast<std::size_t>(domain_size_ / spec_.K), 0);
      } else {
        draw_target();
      }
      break;
    case AdversaryKind::kTransductiveSpecialPoint: {
      if (spec_.d < 1 || spec_.K < 1 ||
          domain_size_ != static_cast<Index>(spec_.d) * spec_.K) {
        throw InputError("transductive_special_point needs |X| = d*K");
      }
      if (T > 0) {
        IndexMatrix rows(T, spec_.K);
        const Index epoch = (T + spec_.d - 1) / spec_.d;
        for (Index t = 0; t < T; ++t) {
          const Index j = std::min<Index>(t / epoch, spec_.d - 1);
          for (Index k = 0; k < spec_.K; ++k) rows(t, k) = j * spec_.K + k;
        }
        hints_ = HintSchedule(std::move(rows));
      }
      parity_.assign(static_cast<std::size_t>(spec_.d), 0);
      break;
    }
    case AdversaryKind::kCustomTable: {
      if (spec_.table_hints.rows() != T ||
          static_cast<Index>(spec_.table_labels.size()) != T) {
        throw InputError("custom_table needs T hint rows and T labels");
      }
      if (!spec_.table_instances.empty() &&
          static_cast<Index>(spec_.table_instances.size()) != T) {
        throw InputError("custom_table instances must have length T");
      }
      if ((spec_.table_hints.array() < 0).any() ||
          (spec_.table_hints.array() >= domain_size_).any()) {
        throw InputError("custom_table hint outside the domain");
      }
      if (T > 0) hints_ = HintSchedule(spec_.table_hints);
      break;
    }
  }
}

double Adversary::alternate(Index block) {
  Index& p = parity_[static_cast<std::size_t>(block)];
  const double y = (p % 2 == 0) ? 1.0 : -1.0;
  ++p;
  return y;
}

RoundPlan Adversary::next_round(Index t, const Transcript& prefix, Rng& rng) {
  if (t < 1 || t > T_) throw InputError("round index outside 1..T");
  RoundPlan plan;
  plan.probs = Eigen::VectorXd::Zero(domain_size_);
  switch (spec_.kind) {
    case AdversaryKind::kRealizableSmooth:
      plan.probs.setConstant(1.0 / static_cast<double>(domain_size_));
      plan.sigma = 1.0;
      plan.x = rng.uniform_index(domain_size_);
      plan.y = (*rule_)(plan.x, rng);
      break;
    case AdversaryKind::kSupportAlternating: {
      plan.probs.head(support_size_)
          .setConstant(1.0 / static_cast<double>(support_size_));
      plan.sigma = static_cast<double>(support_size_) /
                   static_cast<double>(domain_size_);
      plan.x = rng.uniform_index(support_size_);
      plan.y = alternate(plan.x / (support_size_ / spec_.d));
      break;
    }
    case AdversaryKind::kWorstCaseSmallDomain: {
      plan.x = (t - 1) % domain_size_;
      plan.probs(plan.x) = 1.0;
      plan.sigma = 1.0 / static_cast<double>(domain_size_);
      plan.y = 1.0;
      for (auto it = prefix.rounds.rbegin(); it != prefix.rounds.rend(); ++it) {
        if (it->x == plan.x) {
          plan.y = it->prediction > 0.0 ? -1.0 : 1.0;
          break;
        }
      }
      break;
    }
    case AdversaryKind::kTransductiveCyclic:
    case AdversaryKind::kTransductiveSpecialPoint:
    case AdversaryKind::kCustomTable: {
      plan.hinted = true;
      const auto row = hints_->row(t);
      for (Index k = 0; k < row.size(); ++k) {
        plan.probs(row(k)) += 1.0 / static_cast<double>(row.size());
      }
      if (spec_.kind == AdversaryKind::kTransductiveSpecialPoint) {
        const Index j = row(0) / spec_.K;
        plan.x = j * spec_.K;
        plan.y = alternate(j);
      } else if (spec_.kind == AdversaryKind::kCustomTable) {
        plan.x = spec_.table_instances.empty()
                     ? row(rng.uniform_index(row.size()))
                     : spec_.table_instances[static_cast<std::size_t>(t - 1)];
        plan.y = spec_.table_labels[static_cast<std::size_t>(t - 1)];
      } else {
        plan.x = row(rng.uniform_index(row.size()));
        plan.y = spec_.alternating ? alternate(row(0) / spec_.K)
                                   : (*rule_)(plan.x, rng);
      }
      break;
    }
  }
  return plan;
}

}  // namespace sol

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

#include "sol/learner.hpp"

#include <algorithm>
#include <cmath>

#include "sol/errors.hpp"
#include "sol/poisson.hpp"

namespace sol {

Index hint_count(Index T, double sigma, double c_K) {
  if (T < 1) throw InputError("hint_count needs T >= 1");
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw InputError("hint_count needs sigma in (0, 1]");
  }
  if (!(c_K > 0.0)) throw InputError("hint constant must be positive");
  const double k = std::ceil(c_K * std::log(static_cast<double>(T)) / sigma);
  return std::max<Index>(1, static_cast<Index>(k));
}

double default_n(Index T, double sigma, Index domain_size, int d) {
  if (T < 1) throw InputError("default_n needs T >= 1");
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw InputError("default_n needs sigma in (0, 1]");
  }
  if (d < 1 || d > domain_size) throw InputError("default_n needs 1 <= d <= |X|");
  const double t = static_cast<double>(T);
  return std::min(t / std::sqrt(sigma),
                  t * std::sqrt(static_cast<double>(domain_size) / d));
}

void hallucinate(ExampleMultiset& out, Index domain_size, std::int64_t count,
                 std::int64_t multiplicity, Rng& rng) {
  for (std::int64_t i = 0; i < count; ++i) {
    const Index x = rng.uniform_index(domain_size);
    out.add({x, rng.rademacher()}, multiplicity);
  }
}

double transductive_prediction(Oracle& oracle, const ExampleMultiset& history,
                               const ExampleMultiset& hints, Index x,
                               const LossSpec& loss, const TieBreak& tie) {
  ExampleMultiset neg = hints;
  ExampleMultiset pos = hints;
  neg.add({x, -1.0});
  pos.add({x, 1.0});
  const double yhat = oracle.mixed_opt(history, neg, loss, tie).value -
                      oracle.mixed_opt(history, pos, loss, tie).value;
  if (std::abs(yhat) > 1.0 + 1e-9) {
    throw ContractViolation("transductive prediction left [-1, 1]");
  }
  return std::clamp(yhat, -1.0, 1.0);
}

LearnerKind learner_kind_from_name(const std::string& name) {
  if (name == "alg1") return LearnerKind::kAlg1;
  if (name == "alg2") return LearnerKind::kAlg2;
  if (name == "alg3") return LearnerKind::kAlg3;
  if (name == "ftl") return LearnerKind::kFtl;
  if (name == "hedge") return LearnerKind::kHedge;
  if (name == "doubling") return LearnerKind::kDoubling;
  throw InputError("unknown learner kind: " + name);
}

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kAlg1: return "alg1";
    case LearnerKind::kAlg2: return "alg2";
    case LearnerKind::kAlg3: return "alg3";
    case LearnerKind::kFtl: return "ftl";
    case LearnerKind::kHedge: return "hedge";
    case LearnerKind::kDoubling: return "doubling";
  }
  return "unknown";
}

HedgeWeights::HedgeWeights(Index count, double eta)
    : cumulative_(Eigen::VectorXd::Zero(count)), eta_(eta) {
  if (count < 1) throw InputError("hedge needs at least one expert");
  if (!(eta >= 0.0)) throw InputError("hedge learning rate must be >= 0");
}

void HedgeWeights::update(const Eigen::Ref<const Eigen::VectorXd>& losses) {
  cumulative_ += losses;
}

Eigen::VectorXd HedgeWeights::probabilities() const {
  Eigen::ArrayXd logw = -eta_ * cumulative_.array();
  logw -= logw.maxCoeff();
  Eigen::ArrayXd w = logw.exp();
  return (w / w.sum()).matrix();
}

double default_hedge_eta(Index count, Index T) {
  if (T < 1) return 0.0;
  return std::sqrt(8.0 * std::log(static_cast<double>(count)) /
                   static_cast<double>(T));
}

std::vector<double> doubling_sigmas(double sigma_min, double sigma_max) {
  if (!(sigma_min > 0.0 && sigma_min <= sigma_max && sigma_max <= 1.0)) {
    throw InputError("doubling needs 0 < sigma_min <= sigma_max <= 1");
  }
  const auto count = std::max<Index>(
      1, static_cast<Index>(std::ceil(std::log2(sigma_max / sigma_min) - 1e-12)));
  std::vector<double> out;
  for (Index i = 0; i < count; ++i) out.push_back(std::ldexp(sigma_min, static_cast<int>(i)));
  return out;
}

namespace {

void require_binary(const HypothesisClass& cls, const char* who) {
  if (!cls.binary()) throw InputError(std::string(who) + " needs a binary class");
}

void require_sign_label(const LabeledExample& s, const char* who) {
  if (!is_sign(s.y)) throw InputError(std::string(who) + " needs labels in {-1, +1}");
}

// Shared state of the oracle-based learners.
class OracleLearner : public Learner {
 public:
  OracleLearner(const LearnerSpec& spec, const HypothesisClass& cls,
                const StreamBase& streams)
      : spec_(spec), cls_(&cls), oracle_(cls), streams_(streams) {}

  OracleStats oracle_stats() const override { return oracle_.stats(); }

  void observe(Index, const LabeledExample& s) override {
    check_label(spec_.loss, s.y);
    history_.add(s);
  }

 protected:
  TieBreak tie_for(Index t, Index x, std::optional<Rng>& tie_rng) {
    TieBreak tie{spec_.tie, x, nullptr};
    if (spec_.tie == TiePolicy::kSeededRandom) {
      tie_rng.emplace(open_stream(streams_, t, Purpose::kLearnerTies));
      tie.rng = &*tie_rng;
    }
    return tie;
  }

  LearnerSpec spec_;
  const HypothesisClass* cls_;
  Oracle oracle_;
  StreamBase streams_;
  ExampleMultiset history_;
};

class Alg1Learner final : public OracleLearner {
 public:
  Alg1Learner(const LearnerSpec& spec, const HypothesisClass& cls,
              const StreamBase& streams)
      : OracleLearner(spec, cls, streams),
        K_(spec.K ? *spec.K : hint_count(std::max<Index>(spec.T, 1), spec.sigma, spec.c_K)) {
    if (K_ < 1) throw InputError("alg1 needs K >= 1");
  }

  double predict(Index t, Index x) override {
    const std::int64_t count = K_ * (spec_.T - t);
    if (spec_.max_hints_per_round > 0 && count > spec_.max_hints_per_round) {
      throw CapacityError("alg1 needs " + std::to_string(count) +
                          " hints at round " + std::to_string(t) +
                          ", above max_hints_per_round");
    }
    Rng rng = open_stream(streams_, t, Purpose::kLearnerHints);
    ExampleMultiset hints;
    hallucinate(hints, cls_->domain_size(), count, 2, rng);
    std::optional<Rng> tie_rng;
    return transductive_prediction(oracle_, history_, hints, x, spec_.loss,
                                   tie_for(t, x, tie_rng));
  }

  std::int64_t calls_per_round() const override { return 2; }

 private:
  Index K_;
};

class Alg3Learner final : public OracleLearner {
 public:
  Alg3Learner(const LearnerSpec& spec, const HypothesisClass& cls,
              const HintSchedule* hints, const StreamBase& streams)
      : OracleLearner(spec, cls, streams), hints_(hints) {
    if (hints_ == nullptr) throw InputError("alg3 needs a hint schedule");
    if (hints_->rounds() != spec.T) {
      throw InputError("hint schedule must have T rows");
    }
  }

  double predict(Index t, Index x) override {
    if (!hints_->contains(t, x)) {
      throw ContractViolation("x_t is not in Z_t at round " + std::to_string(t));
    }
    Rng rng = open_stream(streams_, t, Purpose::kLearnerHints);
    ExampleMultiset hints;
    for (Index u = t + 1; u <= spec_.T; ++u) {
      const auto row = hints_->row(u);
      for (Index k = 0; k < row.size(); ++k) hints.add({row(k), rng.rademacher()}, 2);
    }
    std::optional<Rng> tie_rng;
    return transductive_prediction(oracle_, history_, hints, x, spec_.loss,
                                   tie_for(t, x, tie_rng));
  }

  std::int64_t calls_per_round() const override { return 2; }

 private:
  const HintSchedule* hints_;
};

class Alg2Learner final : public OracleLearner {
 public:
  Alg2Learner(const LearnerSpec& spec, const HypothesisClass& cls,
              const StreamBase& streams)
      : OracleLearner(spec, cls, streams),
        n_(spec.n ? *spec.n
                  : default_n(std::max<Index>(spec.T, 1), spec.sigma,
                              cls.domain_size(), std::max(1, cls.declared_dim()))) {
    require_binary(cls, "alg2");
    if (!(n_ >= 0.0)) throw InputError("alg2 needs n >= 0");
  }

  double predict(Index t, Index x) override {
    Rng rng = open_stream(streams_, t, Purpose::kLearnerHints);
    const std::int64_t count = poisson_sample(n_, rng);
    ExampleMultiset sample = history_;
    hallucinate(sample, cls_->domain_size(), count, 1, rng);
    std::optional<Rng> tie_rng;
    const auto r = oracle_.erm(sample, LossSpec::binary_indicator(),
                               tie_for(t, x, tie_rng));
    return (*cls_)(r.hypothesis, x);
  }

  void observe(Index t, const LabeledExample& s) override {
    require_sign_label(s, "alg2");
    OracleLearner::observe(t, s);
  }

  std::int64_t calls_per_round() const override { return 1; }

 private:
  double n_;
};

class FtlLearner final : public OracleLearner {
 public:
  using OracleLearner::OracleLearner;

  double predict(Index t, Index x) override {
    std::optional<Rng> tie_rng;
    const auto r = oracle_.erm(history_, spec_.loss, tie_for(t, x, tie_rng));
    return (*cls_)(r.hypothesis, x);
  }

  std::int64_t calls_per_round() const override { return 1; }
};

class HedgeLearner final : public Learner {
 public:
  HedgeLearner(const LearnerSpec& spec, const HypothesisClass& cls,
               const StreamBase& streams)
      : spec_(spec),
        cls_(&cls),
        streams_(streams),
        weights_(cls.size(), spec.hedge_eta ? *spec.hedge_eta
                                            : default_hedge_eta(cls.size(), spec.T)) {}

  double predict(Index t, Index x) override {
    Rng rng = open_stream(streams_, t, Purpose::kHedge);
    const Index h = CategoricalSampler(weights_.probabilities())(rng);
    return (*cls_)(h, x);
  }

  void observe(Index, const LabeledExample& s) override {
    check_label(spec_.loss, s.y);
    weights_.update(loss_column(spec_.loss, cls_->values().col(s.x), s.y).matrix());
  }

  OracleStats oracle_stats() const override { return {}; }
  std::int64_t calls_per_round() const override { return 0; }

 private:
  LearnerSpec spec_;
  const HypothesisClass* cls_;
  StreamBase streams_;
  HedgeWeights weights_;
};

class DoublingLearner final : public Learner {
 public:
  DoublingLearner(const LearnerSpec& spec, const HypothesisClass& cls,
                  const HintSchedule* hints, const StreamBase& streams)
      : spec_(spec),
        streams_(streams),
        weights_(1, 0.0) {
    if (spec.base == LearnerKind::kDoubling) {
      throw InputError("doubling cannot nest itself");
    }
    const auto sigmas = doubling_sigmas(spec.sigma_min, spec.sigma_max);
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      LearnerSpec sub = spec;
      sub.kind = spec.base;
      sub.sigma = sigmas[i];
      StreamBase s = streams;
      s.expert = i;
      experts_.push_back(make_learner(sub, cls, hints, s));
    }
    const auto m = static_cast<Index>(experts_.size());
    weights_ = HedgeWeights(m, spec.hedge_eta ? *spec.hedge_eta
                                              : default_hedge_eta(m, spec.T));
    predictions_.resize(m);
  }

  double predict(Index t, Index x) override {
    for (std::size_t i = 0; i < experts_.size(); ++i) {
      predictions_(static_cast<Index>(i)) = experts_[i]->predict(t, x);
    }
    Rng rng = open_stream(streams_, t, Purpose::kMeta);
    return predictions_(CategoricalSampler(weights_.probabilities())(rng));
  }

  void observe(Index t, const LabeledExample& s) override {
    weights_.update(loss_column(spec_.loss, predictions_, s.y).matrix());
    for (auto& e : experts_) e->observe(t, s);
  }

  OracleStats oracle_stats() const override {
    OracleStats total;
    for (const auto& e : experts_) {
      const auto s = e->oracle_stats();
      total.call_count += s.call_count;
      total.total_input_length += s.total_input_length;
      total.max_input_length = std::max(total.max_input_length, s.max_input_length);
    }
    return total;
  }

  std::int64_t calls_per_round() const override {
    std::int64_t total = 0;
    for (const auto& e : experts_) total += e->calls_per_round();
    return total;
  }

 private:
  LearnerSpec spec_;
  StreamBase streams_;
  std::vector<std::unique_ptr<Learner>> experts_;
  HedgeWeights weights_;
  Eigen::VectorXd predictions_;
};

}  // namespace

std::unique_ptr<Learner> make_learner(const LearnerSpec& spec,
                                      const HypothesisClass& cls,
                                      const HintSchedule* hints,
                                      const StreamBase& streams) {
  if (spec.T < 0) throw InputError("T must be nonnegative");
  if (!(spec.sigma > 0.0 && spec.sigma <= 1.0)) {
    throw InputError("sigma must lie in (0, 1]");
  }
  if (spec.tie == TiePolicy::kPreferNegative) require_binary(cls, "prefer_negative");
  switch (spec.kind) {
    case LearnerKind::kAlg1: return std::make_unique<Alg1Learner>(spec, cls, streams);
    case LearnerKind::kAlg2: return std::make_unique<Alg2Learner>(spec, cls, streams);
    case LearnerKind::kAlg3:
      return std::make_unique<Alg3Learner>(spec, cls, hints, streams);
    case LearnerKind::kFtl: return std::make_unique<FtlLearner>(spec, cls, streams);
    case LearnerKind::kHedge: return std::make_unique<HedgeLearner>(spec, cls, streams);
    case LearnerKind::kDoubling:
      return std::make_unique<DoublingLearner>(spec, cls, hints, streams);
  }
  throw InputError("unknown learner kind");
}

}  // namespace sol

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sol/errors.hpp"
#include "sol/verify.hpp"

using namespace sol;

namespace {

HypothesisClass plus_minus(Index n = 2) {
  Eigen::MatrixXd v(2, n);
  v.row(0).setOnes();
  v.row(1).setConstant(-1.0);
  return HypothesisClass(v, 1, true);
}

}  // namespace

TEST_CASE("transductive relaxation at t = T is minus the best loss") {
  auto cls = make_partition_class(FiniteDomain(4), 2);
  auto hints = make_hint_schedule(HintPattern::kCyclicBlocks, 3, 2, 4);
  std::vector<LabeledExample> seq{{0, 1.0}, {3, -1.0}, {1, -1.0}};
  RelaxationParams p;
  p.T = 3;
  p.t = 3;
  p.K = 2;
  for (LossSpec loss : {LossSpec::absolute(), LossSpec::squared()}) {
    p.loss = loss;
    const auto v = relaxation_value(p, cls, seq, &hints);
    CHECK(v.exact);
    CHECK(v.value == doctest::Approx(-inf_total_loss(cls, seq, loss)).epsilon(1e-14));
  }
}

TEST_CASE("ftpl relaxation with n = 0 and no history is η T") {
  auto cls = make_partition_class(FiniteDomain(4), 2);
  RelaxationParams p;
  p.mode = RelaxationMode::kFtpl;
  p.T = 7;
  p.n = 0.0;
  p.eta = 0.3;
  CHECK(relaxation_value(p, cls, {}, nullptr).value == doctest::Approx(0.3 * 7));
  p.eta.reset();
  p.n = 16.0;
  p.d = 2;
  Rng rng(3);
  const auto v = relaxation_value(p, cls, {}, nullptr, &rng);
  CHECK_FALSE(v.exact);
  CHECK(v.value >= eta_budget(16.0, 1.0, 2, 7, 1.0) * 7);
}

TEST_CASE("smoothed relaxation adds the beta term and matches Monte Carlo") {
  auto cls = plus_minus(3);
  RelaxationParams p;
  p.mode = RelaxationMode::kSmoothedReal;
  p.T = 3;
  p.t = 1;
  p.K = 2;
  p.sigma = 0.5;
  std::vector<LabeledExample> h{{0, 1.0}};
  const auto exact = relaxation_value(p, cls, h, nullptr);
  CHECK(exact.exact);
  // With |V| = 4 and a constant class, 𝔑 depends only on Σε: E max(Σε - 0, -Σε - 1)/… .
  p.trials = 200000;
  p.K = 2;
  Rng rng(9);
  RelaxationParams big = p;
  big.T = 3;
  // Force the sampled path with a wider domain of identical columns.
  Eigen::MatrixXd wide(2, 20);
  wide.row(0).setOnes();
  wide.row(1).setConstant(-1.0);
  HypothesisClass wcls(wide, 1, true);
  const auto mc = relaxation_value(big, wcls, h, nullptr, &rng);
  CHECK_FALSE(mc.exact);
  CHECK(std::abs(mc.value - exact.value) <= 4 * mc.std_error);
  CHECK(exact.value - 2 * 0.5 * beta_budget(3, 2, 0.5) * 2 ==
        doctest::Approx(relaxation_value(RelaxationParams{RelaxationMode::kSmoothedReal,
                                                          LossSpec::absolute(), 3, 1, 2,
                                                          0.0, 1.0},
                                         cls, h, nullptr)
                            .value));
}

TEST_CASE("relaxation stays within [-T, TK] on random small instances") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + rng.uniform_index(3);
    Eigen::MatrixXd v(4, n);
    for (Index i = 0; i < v.size(); ++i) v.data()[i] = rng.rademacher();
    HypothesisClass cls(v, 1, true);
    const Index T = 1 + rng.uniform_index(3), K = 1 + rng.uniform_index(2);
    IndexMatrix rows(T, K);
    for (Index i = 0; i < rows.size(); ++i) rows.data()[i] = rng.uniform_index(n);
    HintSchedule hints(rows);
    const Index t = rng.uniform_index(T + 1);
    std::vector<LabeledExample> hist;
    for (Index i = 0; i < t; ++i) hist.push_back({rng.uniform_index(n), rng.rademacher()});
    RelaxationParams p;
    p.T = T;
    p.t = t;
    p.K = K;
    const double value = relaxation_value(p, cls, hist, &hints).value / (2 * p.loss.lipschitz_G);
    CHECK(value >= -static_cast<double>(T));
    CHECK(value <= static_cast<double>(T * K));
  }
}

TEST_CASE("admissibility: alg3 holds, ftl fails on the alternating instance") {
  auto cls = plus_minus(2);
  AdmissibilityInstance inst;
  inst.cls = &cls;
  inst.hints = make_hint_schedule(HintPattern::kWholeDomain, 2, 2, 2);
  IndexMatrix single = IndexMatrix::Zero(2, 1);
  inst.hints = HintSchedule(single);
  auto alg3 = admissibility_check(LearnerKind::kAlg3, inst);
  CHECK(alg3.passed);
  CHECK(alg3.measured["min_slack"].get<double>() >= -1e-12);
  CHECK(alg3.measured["condition2_holds"].get<bool>());
  auto ftl = admissibility_check(LearnerKind::kFtl, inst);
  CHECK_FALSE(ftl.passed);
  CHECK(ftl.measured["min_slack"].get<double>() == doctest::Approx(-0.5));
  CHECK(ftl.measured["condition2_holds"].get<bool>());

  inst.tie = TiePolicy::kPreferNegative;
  CHECK_FALSE(admissibility_check(LearnerKind::kFtl, inst).passed);
  IndexMatrix too_big = IndexMatrix::Zero(4, 1);
  inst.hints = HintSchedule(too_big);
  CHECK_THROWS_AS(admissibility_check(LearnerKind::kAlg3, inst), CapacityError);
}

TEST_CASE("generalization gap") {
  Rng rng(2);
  HypothesisClass trivial(Eigen::MatrixXd::Ones(1, 4), 0, true);
  auto r0 = generalization_gap_mc(trivial, Eigen::Vector4d::Constant(0.25),
                                  Eigen::Vector4d::Constant(0.5), {}, 16.0, 500, rng);
  CHECK(r0.measured["estimate"].get<double>() == 0.0);
  CHECK(r0.measured["std_error"].get<double>() == 0.0);

  auto cls = make_partition_class(FiniteDomain(8), 2);
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(8, 1.0 / 8);
  const Eigen::VectorXd coin = Eigen::VectorXd::Constant(8, 0.5);
  auto r = generalization_gap_mc(cls, uniform, coin, {}, 256.0, 10000, rng);
  CHECK(r.passed);
  CHECK(r.measured["estimate"].get<double>() <= 3.0 * std::sqrt(2.0 / 256.0));
}

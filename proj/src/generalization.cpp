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

#include <cmath>

#include "sol/errors.hpp"
#include "sol/oracle.hpp"
#include "sol/poisson.hpp"
#include "sol/verify.hpp"

namespace sol {

nlohmann::json to_json(const VerificationReport& r) {
  return {{"name", r.name},
          {"mode", r.mode},
          {"measured", r.measured},
          {"bound", r.bound},
          {"tolerance", r.tolerance},
          {"trials", r.trials},
          {"ci_halfwidth", r.ci_halfwidth},
          {"passed", r.passed},
          {"detail", r.detail}};
}

VerificationReport generalization_gap_mc(const HypothesisClass& cls,
                                         const Eigen::Ref<const Eigen::VectorXd>& D,
                                         const Eigen::Ref<const Eigen::VectorXd>& label_plus,
                                         std::span<const LabeledExample> history,
                                         double n, std::int64_t trials, Rng& rng,
                                         const GapBudget& budget) {
  if (!cls.binary()) throw InputError("generalization gap needs a binary class");
  if (D.size() != cls.domain_size() || label_plus.size() != cls.domain_size()) {
    throw InputError("D and label_plus need one entry per instance");
  }
  check_probability_vector(D);
  if ((label_plus.array() < 0.0).any() || (label_plus.array() > 1.0).any()) {
    throw InputError("label_plus entries must lie in [0, 1]");
  }
  if (!(n > 0.0)) throw InputError("generalization gap needs n > 0");
  if (trials < 2) throw InputError("Monte Carlo needs at least 2 trials");

  const LossSpec indicator = LossSpec::binary_indicator();
  ExampleMultiset base;
  for (const auto& s : history) base.add(s);
  const Eigen::VectorXd history_obj = erm_objective(cls, base, indicator);
  const CategoricalSampler draw_x(D);
  auto draw = [&]() -> LabeledExample {
    const Index x = draw_x(rng);
    return {x, rng.bernoulli(label_plus(x)) ? 1.0 : -1.0};
  };
  // L(h, s) = -y h(x)/2.
  auto L = [&](Index h, const LabeledExample& s) { return -0.5 * s.y * cls(h, s.x); };

  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t i = 0; i < trials; ++i) {
    ExampleMultiset hallucinated;
    const auto count = poisson_sample(n, rng);
    for (std::int64_t j = 0; j < count; ++j) {
      hallucinated.add({rng.uniform_index(cls.domain_size()), rng.rademacher()});
    }
    const Eigen::VectorXd shared = history_obj + erm_objective(cls, hallucinated, indicator);
    const LabeledExample s = draw();
    const LabeledExample s2 = draw();
    auto fit = [&](const LabeledExample& e) {
      const Eigen::VectorXd obj =
          shared + loss_column(indicator, cls.values().col(e.x), e.y).matrix();
      return select_minimizer(cls, obj, {}).hypothesis;
    };
    const Index h1 = fit(s);
    const Index h2 = fit(s2);
    const double v = 0.5 * (L(h1, s2) - L(h1, s) + L(h2, s) - L(h2, s2));
    sum += v;
    sum_sq += v * v;
  }
  const double k = static_cast<double>(trials);
  const double mean = sum / k;
  const double se = std::sqrt(std::max(0.0, sum_sq / k - mean * mean) / (k - 1));

  // Largest σ for which D is σ-smooth.
  const double sigma = 1.0 / (static_cast<double>(D.size()) * D.maxCoeff());
  const double d = std::max(1, cls.declared_dim());
  const double T = static_cast<double>(std::max<Index>(budget.T, 2));
  const double ns = n * sigma;
  const double lemma = budget.c * std::sqrt(d * std::log(T) / ns) +
                       ns / (4.0 * T * T * std::log(T)) + std::exp(-n / 8.0);
  const double reference = budget.c0 * std::sqrt(d / n);

  VerificationReport r;
  r.name = "generalization_gap";
  r.mode = "monte_carlo";
  r.trials = trials;
  r.ci_halfwidth = 3.0 * se;
  r.bound = reference;
  r.measured = {{"estimate", mean},
                {"std_error", se},
                {"c0_sqrt_d_over_n", reference},
                {"lemma_budget", lemma},
                {"sigma", sigma},
                {"n", n}};
  r.passed = mean <= reference + r.ci_halfwidth && mean <= lemma + r.ci_halfwidth;
  if (!r.passed) r.detail = "gap estimate above its budget";
  return r;
}

}  // namespace sol

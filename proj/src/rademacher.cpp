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

#include "sol/rademacher.hpp"

#include <cmath>

namespace sol {

double rademacher_exact(const HypothesisClass& cls, std::span<const Index> z,
                        const Eigen::Ref<const Eigen::VectorXd>& phi) {
  const Eigen::VectorXd p = phi;
  const double sum = rademacher_sum<double>(cls.values(), z, p);
  return std::ldexp(sum, -static_cast<int>(z.size()));
}

MonteCarloValue rademacher_mc(const HypothesisClass& cls,
                              std::span<const Index> z,
                              const Eigen::Ref<const Eigen::VectorXd>& phi,
                              std::int64_t trials, Rng& rng) {
  if (trials < 2) throw InputError("Monte Carlo needs at least 2 trials");
  if (phi.size() != cls.size()) {
    throw InputError("regularizer must have one entry per hypothesis");
  }
  Eigen::VectorXd weights(cls.domain_size());
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t i = 0; i < trials; ++i) {
    weights.setZero();
    for (Index zi : z) weights(zi) += rng.rademacher();
    const double v = (cls.values() * weights + phi).maxCoeff();
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
  return {mean, std::sqrt(var / n), trials};
}

std::optional<int> dyadic_exponent(const Eigen::MatrixXd& values,
                                   const Eigen::VectorXd& phi,
                                   int max_exponent, int magnitude_bits) {
  const double limit = std::ldexp(1.0, magnitude_bits);
  auto integral_at = [limit](double v, int k) {
    const double s = std::ldexp(v, k);
    return s == std::floor(s) && std::abs(s) < limit;
  };
  for (int k = 0; k <= max_exponent; ++k) {
    bool ok = true;
    for (Index i = 0; i < values.size() && ok; ++i) ok = integral_at(values.data()[i], k);
    for (Index i = 0; i < phi.size() && ok; ++i) ok = integral_at(phi(i), k);
    if (ok) return k;
  }
  return std::nullopt;
}

}  // namespace sol

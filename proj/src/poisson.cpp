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

#include "sol/poisson.hpp"

#include <cmath>
#include <limits>

#include "sol/errors.hpp"

namespace sol {

namespace {

constexpr double kInversionLimit = 30.0;

std::int64_t poisson_inversion(double mean, Rng& rng) {
  const double enlam = std::exp(-mean);
  std::int64_t x = 0;
  double prod = 1.0;
  while (true) {
    prod *= rng.uniform01();
    if (prod > enlam) {
      ++x;
    } else {
      return x;
    }
  }
}

std::int64_t poisson_ptrs(double mean, Rng& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2);
  while (true) {
    const double u = rng.uniform01() - 0.5;
    const double v = rng.uniform01();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

}  // namespace

std::int64_t poisson_sample(double mean, Rng& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw InputError("poisson mean must be finite and nonnegative");
  }
  if (mean == 0.0) return 0;
  return mean < kInversionLimit ? poisson_inversion(mean, rng)
                                : poisson_ptrs(mean, rng);
}

double poisson_log_pmf(std::int64_t k, double mean) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (mean == 0.0) {
    return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  const double kd = static_cast<double>(k);
  return kd * std::log(mean) - mean - std::lgamma(kd + 1.0);
}

double poisson_pmf(std::int64_t k, double mean) {
  return std::exp(poisson_log_pmf(k, mean));
}

std::int64_t poisson_upper_cutoff(double mean, double tail) {
  if (!(mean >= 0.0)) throw InputError("poisson mean must be nonnegative");
  if (!(tail > 0.0)) throw InputError("tail must be positive");
  std::int64_t k = 0;
  double cdf = 0.0;
  // Start summing near the mode to avoid underflow for large means.
  const auto start = static_cast<std::int64_t>(
      std::max(0.0, std::floor(mean - 40.0 * std::sqrt(mean + 1.0))));
  for (std::int64_t j = 0; j < start; ++j) cdf += poisson_pmf(j, mean);
  for (k = start;; ++k) {
    cdf += poisson_pmf(k, mean);
    if (1.0 - cdf < tail && k >= mean) return k;
    if (k > static_cast<std::int64_t>(mean + 200.0 * std::sqrt(mean + 1.0) + 200)) {
      return k;
    }
  }
}

}  // namespace sol

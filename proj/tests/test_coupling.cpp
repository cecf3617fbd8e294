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

TEST_CASE("coupling fixtures") {
  Rng rng(4);
  const Eigen::Vector2d uniform(0.5, 0.5);
  // P = Q and σ = 1 accepts every sample.
  for (int i = 0; i < 100; ++i) {
    std::vector<Index> one{rng.uniform_index(2)};
    const auto c = coupling_select(one, uniform, uniform, 1.0, rng);
    CHECK(c.success);
    CHECK(*c.index == 0);
  }
  // P = δ_a, Q = U{a, b}, σ = 1/2: a is always accepted, b never.
  const Eigen::Vector2d point(1.0, 0.0);
  int failures = 0;
  const int trials = 40000;
  for (int i = 0; i < trials; ++i) {
    std::vector<Index> s{rng.uniform_index(2), rng.uniform_index(2)};
    const auto c = coupling_select(s, point, uniform, 0.5, rng);
    if (!c.success) {
      ++failures;
      CHECK(s[0] + s[1] == 2);
    } else {
      CHECK(s[*c.index] == 0);
    }
  }
  const double rate = static_cast<double>(failures) / trials;
  CHECK(std::abs(rate - 0.25) <= 4 * std::sqrt(0.25 * 0.75 / trials));

  std::vector<Index> s{0};
  CHECK_THROWS_AS(coupling_select(s, point, uniform, 0.9, rng), InputError);
  CHECK_THROWS_AS(coupling_select(s, uniform, point, 0.5, rng), InputError);
}

TEST_CASE("coupling Monte Carlo report") {
  Rng rng(8);
  Eigen::VectorXd Q = Eigen::VectorXd::Constant(10, 0.1);
  Eigen::VectorXd P = Eigen::VectorXd::Zero(10);
  P.head(3).setConstant(1.0 / 3.0);
  const auto r = coupling_montecarlo(P, Q, 0.3, 20, 20000, rng);
  CHECK(r.passed);
  CHECK(r.measured["failure_expected"].get<double>() == doctest::Approx(std::pow(0.7, 20)));
  // A law the sampler does not produce must be rejected.
  CouplingTolerances strict;
  strict.tv = 0.0;
  CHECK_FALSE(coupling_montecarlo(P, Q, 0.3, 20, 2000, rng, strict).passed);
}

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

// Reference values below were computed independently with 40-digit
// arithmetic by direct summation over the Poisson grid.

TEST_CASE("tv_exact_poisson fixtures") {
  const std::vector<int> pp{1, 1}, pm{1, -1};
  CHECK(tv_exact_poisson(0.0, 2, Eigen::Vector2d(0.5, 0.5), pp).value == 1.0);
  auto v8 = tv_exact_poisson(8.0, 2, Eigen::Vector2d(0.5, 0.5), pp);
  CHECK(std::abs(v8.value - 0.19536681481316459) <= v8.error_bar);
  CHECK(v8.error_bar <= 1e-9);
  CHECK(v8.value + v8.error_bar <= 1.0 / std::sqrt(8.0));
  auto v32 = tv_exact_poisson(32.0, 2, Eigen::Vector2d(0.5, 0.5), pm);
  CHECK(std::abs(v32.value - 0.099217531622155820) <= v32.error_bar);
  CHECK(v32.value <= 1.0 / std::sqrt(32.0));
  auto v3 = tv_exact_poisson(16.0, 3, Eigen::Vector3d(0.5, 0.25, 0.25), {std::vector<int>{1, -1, 1}});
  CHECK(std::abs(v3.value - 0.14978244753991484) <= v3.error_bar);
  auto point = tv_exact_poisson(4.0, 2, Eigen::Vector2d(1.0, 0.0), pp);
  CHECK(std::abs(point.value - std::exp(-1.0)) <= point.error_bar);
  CHECK_THROWS_AS(tv_exact_poisson(4.0, 5, Eigen::VectorXd::Constant(5, 0.2),
                                   std::vector<int>(5, 1)),
                  CapacityError);
}

TEST_CASE("tv does not depend on the labeling and agrees with Monte Carlo") {
  const Eigen::Vector2d D(0.7, 0.3);
  const double base = tv_exact_poisson(16.0, 2, D, std::vector<int>{1, 1}).value;
  for (auto lab : {std::vector<int>{1, -1}, std::vector<int>{-1, 1}, std::vector<int>{-1, -1}}) {
    CHECK(tv_exact_poisson(16.0, 2, D, lab).value == base);
  }
  Rng rng(17);
  auto mc = tv_montecarlo_poisson(16.0, 2, D, std::vector<int>{1, -1}, 200000, rng);
  CHECK(std::abs(mc.mean - base) <= 4.0 * mc.std_error);
}

TEST_CASE("chi-square closed form, direct evaluation and the TV link") {
  CHECK(chi2_mixture(8.0, 2, Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(0.25));
  CHECK(chi2_mixture(10.0, 4, Eigen::Vector4d(0.25, 0.25, 0.25, 0.25)) ==
        doctest::Approx(2.0 / 10.0));
  CHECK(chi2_mixture(10.0, 4, Eigen::Vector4d(1, 0, 0, 0)) == doctest::Approx(8.0 / 10.0));
  CHECK_THROWS_AS(chi2_mixture(0.0, 2, Eigen::Vector2d(0.5, 0.5)), InputError);

  const Eigen::Vector3d D(0.5, 0.25, 0.25);
  auto direct = chi2_direct(16.0, 3, D);
  CHECK(std::abs(direct.value - chi2_mixture(16.0, 3, D)) <= 1e-9);
  CHECK(direct.value == doctest::Approx(0.140625));

  // σ-smooth D: χ² <= 2/(σn), hence TV <= sqrt(χ²/2) <= 1/sqrt(σn).
  const Eigen::Vector4d smooth(0.4, 0.4, 0.2, 0.0);
  const double sigma = 1.0 / (4 * 0.4);
  const double chi2 = chi2_mixture(20.0, 4, smooth);
  CHECK(chi2 <= 2.0 / (sigma * 20.0) + 1e-15);
  const double tv = tv_exact_poisson(20.0, 4, smooth, std::vector<int>(4, 1)).value;
  CHECK(tv <= std::sqrt(chi2 / 2.0));
  CHECK(std::sqrt(chi2 / 2.0) <= 1.0 / std::sqrt(sigma * 20.0) + 1e-15);
}

TEST_CASE("shifted Poisson TV") {
  CHECK(shifted_poisson_tv(0.0).value == 1.0);
  CHECK(shifted_poisson_tv(8.0).value ==
        doctest::Approx(0.13958653195059693).epsilon(1e-12));
  CHECK(shifted_poisson_tv(1.0).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(shifted_poisson_tv(64.0).value ==
        doctest::Approx(0.049802895821191957).epsilon(1e-12));
  for (double lam = 1.0; lam <= 256.0; lam *= 2) {
    CHECK(shifted_poisson_tv(lam).value <= std::sqrt(1.0 / (2.0 * lam)));
  }
  // λ = n/(2|X|) turns the χ² bound into sqrt(|X|/n).
  const double n = 64.0, X = 4.0;
  CHECK(std::sqrt(1.0 / (2.0 * n / (2.0 * X))) == doctest::Approx(std::sqrt(X / n)));
  CHECK(shifted_poisson_tv(n / (2 * X)).value <= std::sqrt(X / n));
}

TEST_CASE("budget fixtures") {
  CHECK(eta_budget(16.0, 1.0, 1, 3, 1.0) == doctest::Approx(1.0519228).epsilon(1e-6));
  CHECK(std::abs(eta_budget(16.0, 1.0, 1, 3, 1.0) - 1.0519228) <= 1e-5);
  CHECK_THROWS_AS(eta_budget(0.0, 1.0, 1, 3, 1.0), InputError);
  const double e1 = eta_budget(32.0, 0.5, 2, 10, 1.0), e2 = eta_budget(64.0, 0.5, 2, 10, 1.0);
  CHECK(e2 < e1 + 64.0 * 0.5 / (4.0 * 100.0 * std::log(10.0)));
  CHECK(beta_budget(5, 3, 1.0) == 0.0);
  CHECK(beta_budget(10, 5, 0.5) == doctest::Approx(15.625));
  CHECK(std::abs(beta_budget(100, 100, 0.1) - 2.6561398887587) <= 1e-5);
}

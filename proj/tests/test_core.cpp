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

#include <vector>

#include "sol/core.hpp"
#include "sol/errors.hpp"

using namespace sol;

TEST_CASE("loss_eval fixtures") {
  CHECK(loss_eval(LossSpec::centered_binary(), 1.0, 1.0) == -0.5);
  CHECK(loss_eval(LossSpec::binary_indicator(), 1.0, 1.0) == 0.0);
  CHECK(loss_eval(LossSpec::absolute(), 0.5, -0.5) == doctest::Approx(0.5));
  CHECK(loss_eval(LossSpec::squared(), 1.0, -1.0) == 1.0);
  CHECK_THROWS_AS(loss_eval(LossSpec::binary_indicator(), 0.5, 1.0), InputError);
  CHECK_THROWS_AS(loss_eval(LossSpec::absolute(), 1.5, 1.0), InputError);
}

TEST_CASE("centered binary equals indicator minus one half on signs") {
  for (double yh : {-1.0, 1.0}) {
    for (double y : {-1.0, 1.0}) {
      CHECK(loss_eval(LossSpec::centered_binary(), yh, y) ==
            loss_eval(LossSpec::binary_indicator(), yh, y) - 0.5);
    }
  }
}

TEST_CASE("real-valued losses are convex on a grid") {
  for (LossSpec loss : {LossSpec::absolute(), LossSpec::squared(),
                        LossSpec::centered_binary()}) {
    for (double y : {-1.0, 1.0, 0.25}) {
      if (loss.kind == LossKind::kCenteredBinary && y == 0.25) continue;
      for (int i = 0; i <= 8; ++i) {
        for (int j = 0; j <= 8; ++j) {
          const double a = -1.0 + 0.25 * i, b = -1.0 + 0.25 * j;
          for (double lam : {0.0, 0.3, 0.5, 1.0}) {
            const double mid = loss_eval(loss, lam * a + (1 - lam) * b, y);
            CHECK(mid <= lam * loss_eval(loss, a, y) +
                             (1 - lam) * loss_eval(loss, b, y) + 1e-15);
          }
        }
      }
    }
  }
}

TEST_CASE("validate_smooth") {
  CHECK(validate_smooth(Eigen::VectorXd::Constant(8, 1.0 / 8), 1.0));
  CHECK_FALSE(validate_smooth(Eigen::Vector2d(1.0, 0.0), 1.0));
  Eigen::VectorXd half = Eigen::VectorXd::Zero(8);
  half.head(4).setConstant(0.25);
  CHECK(validate_smooth(half, 0.5));
  CHECK_FALSE(validate_smooth(half, 0.6));
  CHECK_THROWS_AS(validate_smooth(Eigen::Vector2d(0.5, 0.6), 1.0), InputError);
}

TEST_CASE("smooth vertices are smooth and extreme") {
  for (Index n : {2, 3, 4, 5}) {
    for (double sigma : {1.0, 0.5, 0.4, 0.25}) {
      const auto vs = smooth_vertices(n, sigma);
      CHECK_FALSE(vs.empty());
      for (const auto& v : vs) {
        CHECK(validate_smooth(v, sigma));
      }
    }
  }
  CHECK(smooth_vertices(4, 0.5).size() == 6);
  CHECK(smooth_vertices(4, 1.0).size() == 1);
}

TEST_CASE("partition class") {
  auto c = make_partition_class(FiniteDomain(4), 2);
  CHECK(c.size() == 4);
  CHECK(c(1, 0) == -1.0);
  CHECK(c(1, 1) == -1.0);
  CHECK(c(1, 2) == 1.0);
  CHECK(make_partition_class(FiniteDomain(2), 1).size() == 2);
  CHECK(make_partition_class(FiniteDomain(6), 3).size() == 8);
  CHECK_THROWS_AS(make_partition_class(FiniteDomain(5), 2), InputError);
  for (int d = 1; d <= 4; ++d) {
    for (Index n = d; n <= 16; n += d) {
      CHECK(compute_vc_dimension(make_partition_class(FiniteDomain(n), d)) == d);
    }
  }
}

TEST_CASE("shatter class") {
  std::vector<Index> one{0};
  auto c1 = make_shatter_class(FiniteDomain(3), one);
  CHECK(c1.size() == 2);
  CHECK((c1.values().col(1).array() == 1.0).all());
  CHECK(c1(0, 0) != c1(1, 0));
  std::vector<Index> three{0, 2, 5};
  CHECK(make_shatter_class(FiniteDomain(6), three).size() == 8);
  CHECK(compute_vc_dimension(make_shatter_class(FiniteDomain(6), three)) == 3);
  std::vector<Index> two{1, 3};
  CHECK(compute_vc_dimension(make_shatter_class(FiniteDomain(4), two)) == 2);
  std::vector<Index> dup{1, 1};
  CHECK_THROWS_AS(make_shatter_class(FiniteDomain(4), dup), InputError);
  std::vector<Index> out{4};
  CHECK_THROWS_AS(make_shatter_class(FiniteDomain(4), out), InputError);
}

TEST_CASE("vc dimension of a singleton class is zero") {
  HypothesisClass c(Eigen::MatrixXd::Ones(1, 5), 0, true);
  CHECK(compute_vc_dimension(c) == 0);
  HypothesisClass big(Eigen::MatrixXd::Ones(1, 17), 0, true);
  CHECK_THROWS_AS(compute_vc_dimension(big), CapacityError);
}

TEST_CASE("multiset counts logical size and merges duplicates") {
  ExampleMultiset s;
  s.add({1, 1.0});
  s.add({1, 1.0}, 2);
  s.add({1, -1.0});
  s.add({0, -0.0});
  s.add({0, 0.0});
  CHECK(s.logical_size() == 6);
  CHECK(s.entries().size() == 3);
  CHECK(s.entries()[0].count == 3);
  ExampleMultiset t;
  t.add_all(s, 2);
  CHECK(t.logical_size() == 12);
}

TEST_CASE("class json round trip") {
  auto c = make_partition_class(FiniteDomain(6), 3);
  auto back = class_from_json(class_to_json(c));
  CHECK(back.values() == c.values());
  CHECK(back.declared_dim() == 3);
  CHECK(back.binary());
  nlohmann::json bad = class_to_json(c);
  bad["hypotheses"][0][0] = 0.5;
  CHECK_THROWS_AS(class_from_json(bad), InputError);
}

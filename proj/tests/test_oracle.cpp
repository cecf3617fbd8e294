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

#include <limits>

#include "sol/errors.hpp"
#include "sol/oracle.hpp"

using namespace sol;

namespace {

HypothesisClass constants(double a, double b, Index n = 2, bool binary = true) {
  Eigen::MatrixXd v(2, n);
  v.row(0).setConstant(a);
  v.row(1).setConstant(b);
  return HypothesisClass(v, 1, binary);
}

// Independent re-enumeration: plain loops over hypotheses and entries.
double brute_min(const HypothesisClass& c, const ExampleMultiset& s,
                 const LossSpec& loss) {
  double best = std::numeric_limits<double>::infinity();
  for (Index h = 0; h < c.size(); ++h) {
    double total = 0.0;
    for (const auto& e : s.entries()) {
      for (std::int64_t k = 0; k < e.count; ++k) {
        total += loss_eval(loss, c(h, e.example.x), e.example.y);
      }
    }
    best = std::min(best, total);
  }
  return best;
}

}  // namespace

TEST_CASE("erm fixtures") {
  auto c = constants(1.0, -1.0);
  Oracle o(c);
  ExampleMultiset s;
  s.add({0, 1.0});
  auto r = o.erm(s, LossSpec::binary_indicator());
  CHECK(r.hypothesis == 0);
  CHECK(r.value == 0.0);
  s.add({1, -1.0});
  r = o.erm(s, LossSpec::binary_indicator());
  CHECK(r.value == 1.0);
  CHECK(r.hypothesis == 0);
  r = o.erm(ExampleMultiset{}, LossSpec::binary_indicator());
  CHECK(r.value == 0.0);
  CHECK(r.hypothesis == 0);
  CHECK(o.stats().call_count == 3);
  CHECK(o.stats().total_input_length == 3);
  CHECK(o.stats().max_input_length == 2);
}

TEST_CASE("prefer_negative picks a minimizer predicting -1 at the query") {
  auto c = constants(1.0, -1.0);
  Oracle o(c);
  TieBreak tie{TiePolicy::kPreferNegative, Index{0}, nullptr};
  CHECK(o.erm(ExampleMultiset{}, LossSpec::binary_indicator(), tie).hypothesis == 1);
  ExampleMultiset s;
  s.add({0, 1.0});
  CHECK(o.erm(s, LossSpec::binary_indicator(), tie).hypothesis == 0);
  auto real = constants(1.0, 0.0, 2, false);
  Oracle ro(real);
  CHECK_THROWS_AS(ro.erm(s, LossSpec::absolute(), tie), InputError);
}

TEST_CASE("seeded_random ties are reproducible") {
  auto c = make_partition_class(FiniteDomain(4), 2);
  Oracle o(c);
  Rng a(7), b(7);
  for (int i = 0; i < 20; ++i) {
    TieBreak ta{TiePolicy::kSeededRandom, std::nullopt, &a};
    TieBreak tb{TiePolicy::kSeededRandom, std::nullopt, &b};
    CHECK(o.erm({}, LossSpec::binary_indicator(), ta).hypothesis ==
          o.erm({}, LossSpec::binary_indicator(), tb).hypothesis);
  }
}

TEST_CASE("mixed_opt fixtures") {
  auto c = constants(1.0, 0.0, 1, false);
  Oracle o(c);
  CHECK(o.mixed_opt({}, {}, LossSpec::absolute()).value == 0.0);
  ExampleMultiset real, bin;
  real.add({0, 1.0});
  bin.add({0, -1.0});
  auto r = o.mixed_opt(real, bin, LossSpec::absolute());
  CHECK(r.value == doctest::Approx(0.5));
  CHECK(r.hypothesis == 0);
  CHECK(mixed_objective(c, real, bin, LossSpec::absolute())(1) ==
        doctest::Approx(0.5));
  ExampleMultiset two;
  two.add({0, 1.0}, 2);
  r = o.mixed_opt({}, two, LossSpec::absolute());
  CHECK(r.value == -1.0);
  CHECK(r.hypothesis == 0);
  CHECK(o.stats().total_input_length == 4);
  ExampleMultiset bad;
  bad.add({0, 0.5});
  CHECK_THROWS_AS(o.mixed_opt({}, bad, LossSpec::absolute()), InputError);
}

TEST_CASE("erm matches brute force and mixed_opt rescales it") {
  Rng rng(11);
  auto c = make_partition_class(FiniteDomain(9), 3);
  for (int trial = 0; trial < 200; ++trial) {
    ExampleMultiset s;
    const int len = static_cast<int>(rng.uniform_index(12));
    for (int i = 0; i < len; ++i) s.add({rng.uniform_index(9), rng.rademacher()});
    Oracle o(c);
    auto r = o.erm(s, LossSpec::binary_indicator());
    CHECK(r.value == brute_min(c, s, LossSpec::binary_indicator()));
    auto m = o.mixed_opt(s, {}, LossSpec::binary_indicator());
    CHECK(m.value == doctest::Approx(r.value));
    CHECK(m.hypothesis == r.hypothesis);
  }
}

TEST_CASE("difference of mixed optima over the query label is within [-1, 1]") {
  Rng rng(5);
  Eigen::MatrixXd v = Eigen::MatrixXd::Random(16, 6);
  HypothesisClass c(v, 1, false);
  Oracle o(c);
  for (int trial = 0; trial < 300; ++trial) {
    ExampleMultiset real, bin;
    for (int i = 0; i < 5; ++i) real.add({rng.uniform_index(6), 2 * rng.uniform01() - 1});
    for (int i = 0; i < 6; ++i) bin.add({rng.uniform_index(6), rng.rademacher()}, 2);
    const Index x = rng.uniform_index(6);
    ExampleMultiset neg = bin, pos = bin;
    neg.add({x, -1.0});
    pos.add({x, 1.0});
    const double diff = o.mixed_opt(real, neg, LossSpec::squared()).value -
                        o.mixed_opt(real, pos, LossSpec::squared()).value;
    CHECK(std::abs(diff) <= 1.0 + 1e-12);
  }
}

TEST_CASE("approx_erm") {
  auto c = constants(1.0, -1.0);
  Oracle o(c);
  ExampleMultiset s;
  s.add({0, 1.0});
  Rng rng(3);
  CHECK(o.approx_erm(s, LossSpec::binary_indicator(), 0.0, rng).hypothesis ==
        o.erm(s, LossSpec::binary_indicator()).hypothesis);
  auto r = o.approx_erm(s, LossSpec::binary_indicator(), 2.0, rng);
  CHECK(r.value <= 2.0);
  CHECK(r.hypothesis == 1);
  CHECK_THROWS_AS(o.approx_erm(s, LossSpec::binary_indicator(), -1.0, rng),
                  InputError);
}

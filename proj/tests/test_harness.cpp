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
#include <numeric>

#include "sol/config.hpp"
#include "sol/errors.hpp"
#include "sol/experiment.hpp"

using namespace sol;
using nlohmann::json;

namespace {

json base_doc() {
  return {{"schema", 1},
          {"experiment_id", "unit"},
          {"learner", "alg2"},
          {"adversary", "realizable_smooth"},
          {"class", {{"kind", "partition"}, {"domain", 8}, {"d", 2}}},
          {"T", 16},
          {"sigma", 0.5},
          {"d", 2},
          {"seeds", {1}}};
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto c = parse_config(base_doc());
  CHECK(c.learner.kind == LearnerKind::kAlg2);
  CHECK(c.loss.kind == LossKind::kBinaryIndicator);
  CHECK(c.seeds == std::vector<std::uint64_t>{1});

  auto doc = base_doc();
  doc["colour"] = "blue";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["class"]["extra"] = 1;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["schema"] = 2;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc.erase("schema");
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["seeds"] = json::array();
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["sigma"] = 0.0;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["T"] = "many";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["learner"] = "alg3";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);  // no hints
  doc["adversary"] = {{"kind", "transductive_cyclic"}};
  doc["K"] = 2;
  CHECK(parse_config(doc).loss.kind == LossKind::kAbsolute);
  doc["loss"] = "binary_indicator";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["loss"] = "squared";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);  // alg2 is binary
  doc = base_doc();
  doc["learner"] = "wizard";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = base_doc();
  doc["class"]["d"] = 3;  // 8 is not divisible into 3 blocks
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc = base_doc();
  doc["seeds"] = {{"base", 10}, {"count", 3}};
  CHECK(parse_config(doc).seeds == std::vector<std::uint64_t>{10, 11, 12});
}

TEST_CASE("config round trip and hash") {
  const auto c = parse_config(base_doc());
  const auto again = parse_config(config_to_json(c));
  CHECK(config_hash(c) == config_hash(again));
  auto moved = c;
  moved.out = "elsewhere";
  moved.record_timing = true;
  CHECK(config_hash(moved) == config_hash(c));
  moved.T = 17;
  CHECK(config_hash(moved) != config_hash(c));
}

TEST_CASE("run_experiment rows") {
  auto c = parse_config(base_doc());
  auto one = run_experiment(c);
  REQUIRE(one.rows.size() == 2);
  CHECK(one.rows[1].seed == "aggregate");
  CHECK(one.rows[1].regret == one.rows[0].regret);
  CHECK(one.rows[0].oracle_calls == 16.0);
  CHECK(one.rows[0].wall_ms == 0.0);
  CHECK(one.rows[0].n.has_value());
  CHECK_FALSE(one.rows[0].K.has_value());

  c.seeds.clear();
  for (std::uint64_t s = 20; s >= 1; --s) c.seeds.push_back(s);
  auto many = run_experiment(c, {4, 0});
  REQUIRE(many.rows.size() == 21);
  double sum = 0.0;
  for (int i = 0; i < 20; ++i) {
    CHECK(many.rows[static_cast<std::size_t>(i)].seed == std::to_string(i + 1));
    sum += many.rows[static_cast<std::size_t>(i)].regret;
    // Regret identity from the raw records.
    const auto& tr = many.transcripts[static_cast<std::size_t>(i)];
    double loss = 0.0;
    for (const auto& r : tr.rounds) loss += r.loss;
    CHECK(loss - tr.bih_loss == tr.regret);
  }
  CHECK(many.rows[20].regret == sum / 20.0);

  const auto serial = run_experiment(c, {1, 0});
  CHECK(rows_to_csv(serial.rows) == rows_to_csv(many.rows));

  auto shifted = run_experiment(c, {1, 100});
  CHECK(shifted.rows[0].seed == "101");

  c.seeds = {3, 3};
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("CSV round trip") {
  auto c = parse_config(base_doc());
  c.seeds = {1, 2, 3};
  const auto res = run_experiment(c);
  const std::string text = rows_to_csv(res.rows);
  CHECK(text.rfind("experiment_id,learner,adversary,class,T,sigma,K,d,n,c_K,tie_policy,seed,"
                   "regret,total_loss,bih_loss,oracle_calls,mean_input_len,wall_ms",
                   0) == 0);
  const auto back = rows_from_csv(text);
  CHECK(rows_to_csv(back) == text);
}

TEST_CASE("sweep expands the grid") {
  auto doc = base_doc();
  doc["sweep"] = {{"T", {4, 8}}, {"sigma", {0.5, 1.0}}};
  const auto c = parse_config(doc);
  const auto points = expand_sweep(c);
  REQUIRE(points.size() == 4);
  CHECK(points[0].T == 4);
  CHECK(points[1].sigma == 1.0);
  CHECK(points[2].T == 8);
  const auto res = run_sweep(c);
  CHECK(res.rows.size() == 8);
  CHECK(res.runs.back() == 3);
}

TEST_CASE("fit_scaling fixtures") {
  std::vector<std::pair<double, double>> pts;
  for (double T : {128.0, 256.0, 512.0, 1024.0}) pts.emplace_back(T, std::sqrt(T));
  auto f = fit_scaling(pts);
  CHECK(f.alpha == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));

  pts.clear();
  for (double T : {10.0, 20.0, 40.0}) pts.emplace_back(T, T);
  CHECK(fit_scaling(pts).alpha == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(5);
  pts.clear();
  for (double T : {64.0, 128.0, 256.0, 512.0, 1024.0, 2048.0}) {
    for (int s = 0; s < 5; ++s) {
      const double noise = 1.0 + 0.02 * (2.0 * rng.uniform01() - 1.0);
      pts.emplace_back(T, 3.0 * std::pow(T, 0.55) * noise);
    }
  }
  f = fit_scaling(pts);
  CHECK(f.alpha >= 0.50);
  CHECK(f.alpha <= 0.60);

  pts = {{1.0, -1.0}, {2.0, 2.0}, {4.0, 4.0}, {8.0, 8.0}};
  f = fit_scaling(pts);
  CHECK(f.warnings.size() == 1);
  CHECK(f.points.size() == 3);
  pts = {{1.0, -1.0}, {2.0, 0.0}, {4.0, -4.0}};
  CHECK_THROWS_AS(fit_scaling(pts), InputError);
  pts = {{1.0, 1.0}, {2.0, 2.0}};
  CHECK_THROWS_AS(fit_scaling(pts), InputError);
}

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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "sol/config.hpp"
#include "sol/errors.hpp"
#include "sol/experiment.hpp"
#include "sol/game.hpp"
#include "sol/verify_suite.hpp"

using namespace sol;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
  bool passed = false;
  std::string detail;
};

bool all_passed(const std::vector<VerificationReport>& reports, std::string& detail) {
  bool ok = true;
  for (const auto& r : reports) {
    if (!r.passed) {
      ok = false;
      detail += r.name + ": " + r.detail + " ";
    }
  }
  return ok;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- 1-5, 10: lemma checks ----

Outcome coupling() {
  const auto reports = check_coupling(kSeed);
  Outcome o;
  o.passed = all_passed(reports, o.detail);
  for (const auto& r : reports) {
    o.detail += fmt("fail_rate=%.3e ", r.measured["failure_rate"].get<double>()) +
                fmt("(expect %.3e) ", r.measured["failure_expected"].get<double>()) +
                fmt("tv=%.4f; ", r.measured["conditional_tv"].get<double>());
  }
  return o;
}

Outcome tv_bound() {
  const auto reports = check_tv(kSeed);
  Outcome o;
  o.passed = all_passed(reports, o.detail);
  const auto& grid = reports.front().measured;
  o.detail += fmt("cases=%.0f ", grid["cases"].get<double>()) +
              fmt("max tv/bound=%.4f ", grid["max_tv_over_bound"].get<double>()) +
              fmt("max error bar=%.2e", grid["max_error_bar"].get<double>());
  return o;
}

Outcome chi2() {
  const auto reports = check_chi2(kSeed);
  Outcome o;
  o.passed = all_passed(reports, o.detail);
  o.detail += fmt("max |closed - direct|=%.2e", reports[0].measured["max_abs_difference"].get<double>());
  return o;
}

Outcome monotonicity() {
  const auto reports = check_monotonicity(kSeed);
  Outcome o;
  o.passed = all_passed(reports, o.detail);
  o.detail += "instances=500 arithmetic=" + reports[0].measured["arithmetic"].dump();
  return o;
}

Outcome admissibility() {
  const auto reports = check_admissibility(kSeed);
  Outcome o;
  o.passed = all_passed(reports, o.detail);
  const auto& m = reports[0].measured;
  o.detail += fmt("alg3 instances=%.0f ", m["instances"].get<double>()) +
              fmt("min slack=%.3g ", m["min_slack"].get<double>()) +
              fmt("cond2 dev=%.3g; ", m["condition2_max_deviation"].get<double>()) +
              fmt("ftl control slack=%.3g", reports[1].measured["min_slack"].get<double>());
  return o;
}

Outcome budgets() {
  const auto reports = check_budgets(kSeed);
  Outcome o;
  o.passed = all_passed(reports, o.detail);
  o.detail += fmt("eta(16,1,1,3,1)=%.7f ", eta_budget(16.0, 1.0, 1, 3, 1.0)) +
              fmt("max beta*T on grid=%.3e", reports[1].measured["max_beta_T"].get<double>());
  return o;
}

// ---- 6: oracle accounting ----

json game_doc(const std::string& id, const std::string& learner, json adversary, Index T,
              double sigma, int d, Index domain) {
  return {{"schema", 1},
          {"experiment_id", id},
          {"learner", learner},
          {"adversary", std::move(adversary)},
          {"class", {{"kind", "partition"}, {"domain", domain}, {"d", d}}},
          {"T", T},
          {"sigma", sigma},
          {"d", d},
          {"seeds", {{"base", 1}, {"count", 10}}}};
}

Outcome accounting() {
  Outcome o;
  o.passed = true;
  auto check_calls = [&](const json& doc, std::int64_t per_round) {
    const auto c = parse_config(doc);
    const auto res = run_experiment(c);
    for (const auto& tr : res.transcripts) {
      if (tr.learner_stats.call_count != per_round * c.T) o.passed = false;
      if (tr.final_stats.call_count != 1) o.passed = false;
      for (const auto& r : tr.rounds) {
        if (r.oracle_calls != per_round) o.passed = false;
      }
    }
    return res;
  };
  json a3 = game_doc("acc_alg3", "alg3", {{"kind", "transductive_cyclic"}}, 200, 0.25, 4, 64);
  a3["K"] = 4;
  check_calls(a3, 2);
  json a1 = game_doc("acc_alg1", "alg1", "realizable_smooth", 24, 0.5, 2, 16);
  a1["loss"] = "absolute";
  a1["c_K"] = 1.0;
  check_calls(a1, 2);
  const json a2 = game_doc("acc_alg2", "alg2", "realizable_smooth", 400, 0.25, 4, 64);
  const auto res = check_calls(a2, 1);
  if (!o.passed) o.detail += "call counts differ from 2T / T; ";

  // Alg 2 input length is (t-1) + N_t with N_t ~ Poi(n): the mean excess over
  // all rounds and seeds must sit within 3 CLT standard errors of n.
  const double n = *res.rows.front().n;
  double excess = 0.0, count = 0.0;
  for (const auto& tr : res.transcripts) {
    for (const auto& r : tr.rounds) {
      excess += static_cast<double>(r.input_length - (r.t - 1));
      count += 1.0;
    }
  }
  const double mean = excess / count;
  const double band = 3.0 * std::sqrt(n / count);
  if (std::abs(mean - n) > band) {
    o.passed = false;
    o.detail += "alg2 input length outside the CLT band; ";
  }
  o.detail += fmt("alg3 2T, alg1 2T, alg2 T exact; alg2 mean hallucination=%.3f ", mean) +
              fmt("n=%.3f ", n) + fmt("band=%.3f", band);
  return o;
}

// ---- 7: prediction range under fuzzing ----

Outcome prediction_range() {
  Rng rng(kSeed);
  std::int64_t rounds[2] = {0, 0};
  double worst = 0.0;
  std::string failure;
  const LossSpec losses[] = {LossSpec::absolute(), LossSpec::squared(),
                             LossSpec::centered_binary()};
  std::uint64_t game = 0;
  while (rounds[0] < 10000 || rounds[1] < 10000) {
    const int which = rounds[0] <= rounds[1] ? 0 : 1;  // 0: alg1, 1: alg3
    const Index domain = 2 + rng.uniform_index(7);
    const Index rows = 1 + rng.uniform_index(8);
    Eigen::MatrixXd v(rows, domain);
    const int style = static_cast<int>(rng.uniform_index(3));
    for (Index i = 0; i < v.size(); ++i) {
      v.data()[i] = style == 0   ? rng.rademacher()
                    : style == 1 ? static_cast<double>(rng.uniform_index(9) - 4) / 4.0
                                 : 2.0 * rng.uniform01() - 1.0;
    }
    const HypothesisClass cls(v, 1, style == 0);
    const LossSpec loss = losses[rng.uniform_index(3)];
    const Index T = 1 + rng.uniform_index(30);
    const Index K = 1 + rng.uniform_index(3);
    IndexMatrix table(T, K);
    for (Index i = 0; i < table.size(); ++i) table.data()[i] = rng.uniform_index(domain);
    const HintSchedule hints(table);

    LearnerSpec spec;
    spec.kind = which == 0 ? LearnerKind::kAlg1 : LearnerKind::kAlg3;
    spec.loss = loss;
    spec.T = T;
    spec.sigma = 0.25 + 0.75 * rng.uniform01();
    spec.K = K;
    spec.tie = rng.bernoulli(0.5) ? TiePolicy::kLowestIndex : TiePolicy::kSeededRandom;
    auto learner = make_learner(spec, cls, which == 1 ? &hints : nullptr,
                                StreamBase{kSeed, ++game, 0});
    try {
      for (Index t = 1; t <= T; ++t) {
        const Index x = which == 1 ? table(t - 1, rng.uniform_index(K)) : rng.uniform_index(domain);
        const double yhat = learner->predict(t, x);
        worst = std::max(worst, std::abs(yhat));
        if (!(std::abs(yhat) <= 1.0)) failure = "prediction outside [-1, 1]";
        const double y = loss.kind == LossKind::kCenteredBinary || rng.bernoulli(0.5)
                             ? rng.rademacher()
                             : 2.0 * rng.uniform01() - 1.0;
        learner->observe(t, {x, y});
        ++rounds[which];
      }
    } catch (const ContractViolation& e) {
      failure = e.what();
    }
    if (!failure.empty()) break;
  }
  Outcome o;
  o.passed = failure.empty();
  o.detail = failure + fmt("alg1 rounds=%.0f ", static_cast<double>(rounds[0])) +
             fmt("alg3 rounds=%.0f ", static_cast<double>(rounds[1])) +
             fmt("max |yhat|=%.17g", worst);
  return o;
}

// ---- 8: FTL vs Poissonized FTPL ----

json separation_doc(const std::string& learner) {
  return {{"schema", 1},
          {"experiment_id", "separation_" + learner},
          {"learner", learner},
          {"adversary", "support_alternating"},
          {"class", {{"kind", "partition"}, {"domain", 64}, {"d", 2}, {"support", 16}}},
          {"T", 512},
          {"sigma", 0.25},
          {"d", 2},
          {"tie", "prefer_negative"},
          {"loss", "binary_indicator"},
          {"seeds", {{"base", 1}, {"count", 20}}}};
}

Outcome separation() {
  const auto ftl = run_experiment(parse_config(separation_doc("ftl"))).rows.back();
  const auto alg2 = run_experiment(parse_config(separation_doc("alg2"))).rows.back();
  Outcome o;
  o.passed = ftl.regret >= 0.4 * 512 && alg2.regret <= 0.15 * 512;
  o.detail = fmt("ftl mean regret=%.2f ", ftl.regret) + fmt("(>= %.1f) ", 0.4 * 512) +
             fmt("alg2 mean regret=%.2f ", alg2.regret) + fmt("(<= %.1f)", 0.15 * 512);
  return o;
}

// ---- 9: scaling shape ----

Outcome scaling() {
  Outcome o;
  o.passed = true;
  for (const std::string learner : {"alg2", "alg3"}) {
    json doc = {{"schema", 1},
                {"experiment_id", "scaling_" + learner},
                {"learner", learner},
                {"class", {{"kind", "partition"}, {"domain", 64}, {"d", 4}}},
                {"T", 128},
                {"sigma", 0.25},
                {"d", 4},
                {"seeds", {{"base", 1}, {"count", 20}}},
                {"sweep", {{"T", {128, 256, 512, 1024}}}}};
    if (learner == "alg3") {
      doc["adversary"] = {{"kind", "transductive_cyclic"}, {"alternating", false}};
      doc["K"] = 4;
      doc["loss"] = "absolute";
    } else {
      doc["adversary"] = "realizable_smooth";
    }
    const auto res = run_sweep(parse_config(doc));
    std::vector<std::pair<double, double>> means;
    for (const auto& r : res.rows) {
      if (r.seed == "aggregate") means.emplace_back(static_cast<double>(r.T), r.regret);
    }
    const auto fit = fit_scaling(means);
    bool decreasing = true;
    for (std::size_t i = 1; i < means.size(); ++i) {
      decreasing = decreasing && means[i].second / means[i].first <
                                     means[i - 1].second / means[i - 1].first;
    }
    const bool ok = fit.alpha >= 0.3 && fit.alpha <= 0.75 && decreasing && fit.warnings.empty();
    o.passed = o.passed && ok;
    o.detail += learner + fmt(" alpha=%.3f", fit.alpha) + fmt(" r2=%.3f", fit.r2) +
                " regret/T=[";
    for (const auto& [T, m] : means) o.detail += fmt("%.4f ", m / T);
    o.detail += decreasing ? "] decreasing; " : "] NOT decreasing; ";
  }
  return o;
}

// ---- 11: determinism ----

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / ("sol_acceptance_" + std::to_string(::getpid()));
  std::vector<json> docs;
  docs.push_back(separation_doc("ftl"));
  docs.push_back(separation_doc("alg2"));
  json a3 = game_doc("det_alg3", "alg3", {{"kind", "transductive_cyclic"}}, 64, 0.25, 4, 64);
  a3["K"] = 4;
  a3["tie"] = "seeded_random";
  docs.push_back(a3);
  json a1 = game_doc("det_alg1", "alg1", "realizable_smooth", 16, 0.5, 2, 16);
  a1["loss"] = "squared";
  a1["c_K"] = 2.0;
  docs.push_back(a1);
  docs.push_back(game_doc("det_hedge", "hedge", "worst_case_small_domain", 64, 0.5, 2, 8));
  json dbl = game_doc("det_doubling", "doubling", "realizable_smooth", 64, 0.25, 2, 16);
  dbl["learner"] = {{"kind", "doubling"}, {"sigma_min", 0.125}, {"sigma_max", 1.0}};
  docs.push_back(dbl);

  std::size_t files = 0;
  std::string failure;
  for (auto doc : docs) {
    doc["transcripts"] = true;
    const auto c = parse_config(doc);
    const auto a = run_experiment(c, {1, 0});
    const auto b = run_experiment(c, {4, 0});
    write_outputs(c, a, (root / "a").string());
    write_outputs(c, b, (root / "b").string());
  }
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path other = root / "b" / fs::relative(entry.path(), root / "a");
    ++files;
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      failure = "differs: " + fs::relative(entry.path(), root).string();
      break;
    }
  }
  fs::remove_all(root);
  Outcome o;
  o.passed = failure.empty() && files > 0;
  o.detail = failure + "6 configs x (jobs 1 vs 4), " + std::to_string(files) +
             " CSV/transcript files byte-identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "coupling lemma", 30, coupling},
      {2, "poisson tv bound", 60, tv_bound},
      {3, "chi-square identity", 0, chi2},
      {4, "rademacher monotonicity", 0, monotonicity},
      {5, "admissibility", 0, admissibility},
      {6, "oracle call accounting", 0, accounting},
      {7, "prediction range", 0, prediction_range},
      {8, "ftl vs poissonized ftpl", 300, separation},
      {9, "sublinear scaling", 900, scaling},
      {10, "budget formulas", 0, budgets},
      {11, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.passed = false;
      o.detail += fmt(" over the %.0f s budget", c.budget_s);
    }
    std::printf("%s %2d %-26s %6.2fs  %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.passed ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

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

#include "sol/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "sol/errors.hpp"
#include "sol/game.hpp"

namespace sol {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("bad ") + what + " value '" + s + "' in CSV");
  }
}

bool uses_hints(const ExperimentConfig& c) {
  return c.learner.kind == LearnerKind::kAlg1 || c.learner.kind == LearnerKind::kAlg3;
}

ResultRow base_row(const ExperimentConfig& c) {
  ResultRow r;
  r.experiment_id = c.experiment_id;
  r.learner = to_string(c.learner.kind);
  r.adversary = to_string(c.adversary.kind);
  r.cls = class_label(c);
  r.T = c.T;
  r.sigma = c.sigma;
  r.d = c.d;
  r.c_K = c.c_K;
  r.tie_policy = to_string(c.tie);
  if (c.learner.kind == LearnerKind::kAlg1) {
    r.K = c.K ? *c.K : (c.T >= 1 ? hint_count(c.T, c.sigma, c.c_K) : 0);
  } else if (uses_hints(c)) {
    r.K = c.K.value_or(1);
  }
  if (c.learner.kind == LearnerKind::kAlg2) {
    r.n = c.n ? *c.n : (c.T >= 1 ? default_n(c.T, c.sigma, c.cls.domain, c.d) : 0.0);
  }
  return r;
}

}  // namespace

const std::vector<std::string> kCsvColumns{
    "experiment_id", "learner",  "adversary", "class",        "T",         "sigma",
    "K",             "d",        "n",         "c_K",          "tie_policy", "seed",
    "regret",        "total_loss", "bih_loss", "oracle_calls", "mean_input_len", "wall_ms",
    "regret_stderr"};

ResultRow aggregate_row(std::span<const ResultRow> rows) {
  if (rows.empty()) throw InputError("aggregate needs at least one row");
  ResultRow a = rows.front();
  a.seed = "aggregate";
  const auto k = static_cast<double>(rows.size());
  auto mean = [&](double ResultRow::*field) {
    double s = 0.0;
    for (const auto& r : rows) s += r.*field;
    return s / k;
  };
  a.regret = mean(&ResultRow::regret);
  a.total_loss = mean(&ResultRow::total_loss);
  a.bih_loss = mean(&ResultRow::bih_loss);
  a.oracle_calls = mean(&ResultRow::oracle_calls);
  a.mean_input_len = mean(&ResultRow::mean_input_len);
  a.wall_ms = mean(&ResultRow::wall_ms);
  a.regret_stderr = 0.0;
  if (rows.size() > 1) {
    double ss = 0.0;
    for (const auto& r : rows) ss += (r.regret - a.regret) * (r.regret - a.regret);
    a.regret_stderr = std::sqrt(ss / (k - 1.0) / k);
  }
  return a;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options,
                                std::uint64_t run) {
  validate_config(config);
  const HypothesisClass cls = build_class(config);
  std::vector<std::uint64_t> seeds;
  for (auto s : config.seeds) seeds.push_back(s + options.seed_base);
  std::sort(seeds.begin(), seeds.end());
  if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end()) {
    throw ConfigError("seeds must be distinct");
  }

  std::vector<Transcript> transcripts(seeds.size());
  std::vector<double> wall_ms(seeds.size(), 0.0);
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        const auto start = std::chrono::steady_clock::now();
        transcripts[i] = play_game(make_game_setup(config, cls, seeds[i], run));
        if (config.record_timing) {
          wall_ms[i] = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(seeds.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult out;
  const ResultRow base = base_row(config);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Transcript& tr = transcripts[i];
    ResultRow r = base;
    r.seed = std::to_string(seeds[i]);
    r.regret = tr.regret;
    r.total_loss = tr.total_loss;
    r.bih_loss = tr.bih_loss;
    r.oracle_calls = static_cast<double>(tr.learner_stats.call_count);
    r.mean_input_len = tr.learner_stats.call_count > 0
                           ? static_cast<double>(tr.learner_stats.total_input_length) /
                                 static_cast<double>(tr.learner_stats.call_count)
                           : 0.0;
    r.wall_ms = wall_ms[i];
    out.rows.push_back(r);
    out.runs.push_back(run);
  }
  out.rows.push_back(aggregate_row(out.rows));
  out.transcripts = std::move(transcripts);
  return out;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& c) {
  auto or_base = [](const auto& grid, auto base) {
    using V = std::decay_t<decltype(base)>;
    return grid.empty() ? std::vector<V>{base} : std::vector<V>(grid.begin(), grid.end());
  };
  std::vector<std::optional<Index>> Ks;
  if (c.sweep.K.empty()) {
    Ks.push_back(c.K);
  } else {
    for (Index K : c.sweep.K) Ks.emplace_back(K);
  }
  std::vector<std::optional<double>> ns;
  if (c.sweep.n.empty()) {
    ns.push_back(c.n);
  } else {
    for (double n : c.sweep.n) ns.emplace_back(n);
  }
  std::vector<ExperimentConfig> out;
  for (Index T : or_base(c.sweep.T, c.T)) {
    for (double sigma : or_base(c.sweep.sigma, c.sigma)) {
      for (const auto& K : Ks) {
        for (const auto& n : ns) {
          ExperimentConfig point = c;
          point.sweep = {};
          point.T = T;
          point.sigma = sigma;
          point.K = K;
          point.n = n;
          out.push_back(std::move(point));
        }
      }
    }
  }
  return out;
}

ExperimentResult run_sweep(const ExperimentConfig& config, const RunOptions& options) {
  const auto points = expand_sweep(config);
  for (const auto& p : points) validate_config(p);
  ExperimentResult out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto part = run_experiment(points[i], options, i);
    out.rows.insert(out.rows.end(), part.rows.begin(), part.rows.end());
    for (auto& tr : part.transcripts) out.transcripts.push_back(std::move(tr));
    out.runs.insert(out.runs.end(), part.runs.begin(), part.runs.end());
  }
  return out;
}

std::string rows_to_csv(std::span<const ResultRow> rows) {
  std::string out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    out += (i ? "," : "") + kCsvColumns[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    const std::vector<std::string> cells{
        r.experiment_id, r.learner, r.adversary, r.cls, std::to_string(r.T), fmt(r.sigma),
        r.K ? std::to_string(*r.K) : "", std::to_string(r.d), r.n ? fmt(*r.n) : "",
        fmt(r.c_K), r.tie_policy, r.seed, fmt(r.regret), fmt(r.total_loss), fmt(r.bih_loss),
        fmt(r.oracle_calls), fmt(r.mean_input_len), fmt(r.wall_ms), fmt(r.regret_stderr)};
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw InputError("empty CSV");
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"T", "seed", "regret"}) {
    if (!col.count(need)) throw InputError(std::string("CSV lacks column ") + need);
  }
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw InputError("CSV row has the wrong width");
    auto cell = [&](const char* name) -> std::string {
      auto it = col.find(name);
      return it == col.end() ? std::string() : cells[it->second];
    };
    auto num = [&](const char* name, double fallback) {
      const auto s = cell(name);
      return s.empty() ? fallback : to_double(s, name);
    };
    ResultRow r;
    r.experiment_id = cell("experiment_id");
    r.learner = cell("learner");
    r.adversary = cell("adversary");
    r.cls = cell("class");
    r.T = static_cast<Index>(to_double(cell("T"), "T"));
    r.sigma = num("sigma", 1.0);
    if (!cell("K").empty()) r.K = static_cast<Index>(num("K", 0.0));
    r.d = static_cast<int>(num("d", 1.0));
    if (!cell("n").empty()) r.n = num("n", 0.0);
    r.c_K = num("c_K", 0.0);
    r.tie_policy = cell("tie_policy");
    r.seed = cell("seed");
    r.regret = to_double(cell("regret"), "regret");
    r.total_loss = num("total_loss", 0.0);
    r.bih_loss = num("bih_loss", 0.0);
    r.oracle_calls = num("oracle_calls", 0.0);
    r.mean_input_len = num("mean_input_len", 0.0);
    r.wall_ms = num("wall_ms", 0.0);
    r.regret_stderr = num("regret_stderr", 0.0);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                          const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path csv = fs::path(out_dir) / (config.experiment_id + ".csv");
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << text;
    if (!f) throw Error("failed writing " + p.string());
  };
  write(csv, rows_to_csv(result.rows));
  if (config.transcripts) {
    const fs::path dir = fs::path(out_dir) / config.experiment_id;
    fs::create_directories(dir);
    for (std::size_t i = 0; i < result.transcripts.size(); ++i) {
      const Transcript& tr = result.transcripts[i];
      const std::string stem =
          "run" + std::to_string(result.runs[i]) + "_seed" + std::to_string(tr.seed);
      write(dir / (stem + ".json"),
            transcript_to_json(tr, config.record_timing).dump(1) + "\n");
      write(dir / (stem + ".csv"), transcript_to_csv(tr, config.record_timing));
    }
  }
  return csv.string();
}

ScalingFit fit_scaling(std::span<const std::pair<double, double>> T_regret) {
  std::map<double, std::pair<double, int>> by_T;
  for (const auto& [T, regret] : T_regret) {
    if (!(T > 0.0)) throw InputError("fit needs positive T");
    auto& slot = by_T[T];
    slot.first += regret;
    slot.second += 1;
  }
  ScalingFit fit;
  for (const auto& [T, acc] : by_T) {
    const double mean = acc.first / acc.second;
    if (mean > 0.0) {
      fit.points.emplace_back(T, mean);
    } else {
      fit.warnings.push_back("T=" + fmt(T) + " excluded: mean regret " + fmt(mean) +
                             " is not positive");
    }
  }
  if (fit.points.size() < 3) {
    throw InputError("fit needs at least 3 distinct T with positive mean regret");
  }
  const auto m = static_cast<Index>(fit.points.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd b(m);
  for (Index i = 0; i < m; ++i) {
    A(i, 0) = std::log(fit.points[static_cast<std::size_t>(i)].first);
    A(i, 1) = 1.0;
    b(i) = std::log(fit.points[static_cast<std::size_t>(i)].second);
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  fit.alpha = coef(0);
  fit.intercept = coef(1);
  const double ss_res = (A * coef - b).squaredNorm();
  const double ss_tot = (b.array() - b.mean()).square().sum();
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

nlohmann::json fit_rows(std::span<const ResultRow> rows) {
  using Key = std::tuple<std::string, std::string, std::string, std::string, double, int,
                         double, std::string>;
  std::map<Key, std::vector<std::pair<double, double>>> groups;
  for (const auto& r : rows) {
    if (r.seed == "aggregate") continue;
    groups[{r.experiment_id, r.learner, r.adversary, r.cls, r.sigma, r.d, r.c_K, r.tie_policy}]
        .emplace_back(static_cast<double>(r.T), r.regret);
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [key, points] : groups) {
    const auto fit = fit_scaling(points);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [T, mean] : fit.points) pts.push_back({{"T", T}, {"mean_regret", mean}});
    out.push_back({{"experiment_id", std::get<0>(key)},
                   {"learner", std::get<1>(key)},
                   {"adversary", std::get<2>(key)},
                   {"class", std::get<3>(key)},
                   {"sigma", std::get<4>(key)},
                   {"alpha", fit.alpha},
                   {"intercept", fit.intercept},
                   {"r2", fit.r2},
                   {"points", pts},
                   {"warnings", fit.warnings}});
  }
  return out;
}

}  // namespace sol

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

#include "sol/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sol/errors.hpp"
#include "sol/rng.hpp"

namespace sol {

namespace {

using nlohmann::json;

// Reads the keys of one JSON object and rejects whatever is left over.
class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  template <typename T>
  std::optional<T> get(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    try {
      return it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + " has the wrong type");
    }
  }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() || it->is_null() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("unknown key " + where_ + "." + it.key());
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename F>
auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

bool learner_needs_hints(const LearnerSpec& s) {
  return s.kind == LearnerKind::kAlg3 ||
         (s.kind == LearnerKind::kDoubling && s.base == LearnerKind::kAlg3);
}

bool transductive_adversary(AdversaryKind k) {
  return k == AdversaryKind::kTransductiveCyclic ||
         k == AdversaryKind::kTransductiveSpecialPoint || k == AdversaryKind::kCustomTable;
}

void parse_learner(const json& doc, ExperimentConfig& c) {
  if (doc.is_string()) {
    c.learner.kind = as_config_error([&] { return learner_kind_from_name(doc.get<std::string>()); });
    return;
  }
  Reader r(doc, "learner");
  const auto kind = r.get<std::string>("kind");
  if (!kind) throw ConfigError("learner.kind is required");
  c.learner.kind = as_config_error([&] { return learner_kind_from_name(*kind); });
  if (auto v = r.get<double>("hedge_eta")) c.learner.hedge_eta = *v;
  if (auto v = r.get<double>("sigma_min")) {
    c.learner.sigma_min = *v;
    c.doubling_range = true;
  }
  if (auto v = r.get<double>("sigma_max")) {
    c.learner.sigma_max = *v;
    c.doubling_range = true;
  }
  if (auto v = r.get<std::string>("base")) {
    c.learner.base = as_config_error([&] { return learner_kind_from_name(*v); });
  }
  if (auto v = r.get<std::int64_t>("max_hints_per_round")) c.learner.max_hints_per_round = *v;
  r.finish();
}

void parse_adversary(const json& doc, ExperimentConfig& c) {
  if (doc.is_string()) {
    c.adversary.kind =
        as_config_error([&] { return adversary_kind_from_name(doc.get<std::string>()); });
    return;
  }
  Reader r(doc, "adversary");
  const auto kind = r.get<std::string>("kind");
  if (!kind) throw ConfigError("adversary.kind is required");
  c.adversary.kind = as_config_error([&] { return adversary_kind_from_name(*kind); });
  if (auto v = r.get<double>("delta")) c.adversary.delta = *v;
  if (auto v = r.get<bool>("alternating")) c.adversary.alternating = *v;
  if (const json* table = r.raw("table")) {
    Reader t(*table, "adversary.table");
    const auto hints = t.get<std::vector<std::vector<Index>>>("hints");
    const auto labels = t.get<std::vector<double>>("labels");
    if (!hints || !labels) throw ConfigError("adversary.table needs hints and labels");
    const auto K = hints->empty() ? Index{0} : static_cast<Index>(hints->front().size());
    IndexMatrix m(static_cast<Index>(hints->size()), K);
    for (std::size_t i = 0; i < hints->size(); ++i) {
      if (static_cast<Index>((*hints)[i].size()) != K) {
        throw ConfigError("adversary.table.hints rows must share one width");
      }
      for (Index k = 0; k < K; ++k) m(static_cast<Index>(i), k) = (*hints)[i][static_cast<std::size_t>(k)];
    }
    c.adversary.table_hints = m;
    c.adversary.table_labels = *labels;
    if (auto v = t.get<std::vector<Index>>("instances")) c.adversary.table_instances = *v;
    t.finish();
  }
  r.finish();
}

void parse_class(const json& doc, ExperimentConfig& c) {
  Reader r(doc, "class");
  if (auto v = r.get<std::string>("kind")) c.cls.kind = *v;
  if (auto v = r.get<Index>("domain")) c.cls.domain = *v;
  if (auto v = r.get<int>("d")) c.cls.d = *v;
  if (auto v = r.get<Index>("support")) c.cls.support = *v;
  if (auto v = r.get<std::vector<Index>>("special")) c.cls.special = *v;
  if (const json* v = r.raw("custom")) c.cls.custom = *v;
  r.finish();
  if (c.cls.kind != "partition" && c.cls.kind != "shatter" && c.cls.kind != "custom") {
    throw ConfigError("class.kind must be partition, shatter or custom");
  }
  if (c.cls.kind == "custom" && c.cls.custom.is_null()) {
    throw ConfigError("class.custom is required for a custom class");
  }
}

void parse_seeds(const json& doc, ExperimentConfig& c) {
  if (doc.is_array()) {
    try {
      c.seeds = doc.get<std::vector<std::uint64_t>>();
    } catch (const json::exception&) {
      throw ConfigError("seeds must be nonnegative integers");
    }
    return;
  }
  Reader r(doc, "seeds");
  const auto base = r.get<std::uint64_t>("base").value_or(0);
  const auto count = r.get<std::uint64_t>("count");
  r.finish();
  if (!count) throw ConfigError("seeds.count is required");
  for (std::uint64_t i = 0; i < *count; ++i) c.seeds.push_back(base + i);
}

void parse_sweep(const json& doc, ExperimentConfig& c) {
  Reader r(doc, "sweep");
  if (auto v = r.get<std::vector<Index>>("T")) c.sweep.T = *v;
  if (auto v = r.get<std::vector<double>>("sigma")) c.sweep.sigma = *v;
  if (auto v = r.get<std::vector<Index>>("K")) c.sweep.K = *v;
  if (auto v = r.get<std::vector<double>>("n")) c.sweep.n = *v;
  r.finish();
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c;
  Reader r(doc, "config");
  const auto schema = r.get<int>("schema");
  if (!schema) throw ConfigError("config.schema is required");
  if (*schema != kConfigSchema) {
    throw ConfigError("unsupported config schema " + std::to_string(*schema));
  }
  if (auto v = r.get<std::string>("experiment_id")) c.experiment_id = *v;
  if (c.experiment_id.empty() ||
      c.experiment_id.find_first_of(",/\\\n\"") != std::string::npos) {
    throw ConfigError("experiment_id must be nonempty without , / \\ or quotes");
  }
  const json* learner = r.raw("learner");
  const json* adversary = r.raw("adversary");
  if (!learner || !adversary) throw ConfigError("learner and adversary are required");
  parse_learner(*learner, c);
  parse_adversary(*adversary, c);
  if (const json* v = r.raw("class")) parse_class(*v, c);
  if (auto v = r.get<Index>("T")) c.T = *v;
  if (auto v = r.get<double>("sigma")) c.sigma = *v;
  if (auto v = r.get<Index>("K")) c.K = *v;
  if (auto v = r.get<int>("d")) c.d = *v;
  if (auto v = r.get<double>("n")) c.n = *v;
  if (auto v = r.get<double>("c_K")) c.c_K = *v;
  if (auto v = r.get<std::string>("tie")) {
    c.tie = as_config_error([&] { return tie_policy_from_name(*v); });
  }
  const bool real_valued = c.learner.kind == LearnerKind::kAlg1 ||
                           c.learner.kind == LearnerKind::kAlg3;
  c.loss = real_valued ? LossSpec::absolute() : LossSpec::binary_indicator();
  if (auto v = r.get<std::string>("loss")) {
    c.loss = as_config_error([&] { return LossSpec::from_name(*v); });
  }
  const json* seeds = r.raw("seeds");
  if (!seeds) throw ConfigError("seeds are required");
  parse_seeds(*seeds, c);
  if (auto v = r.get<std::string>("out")) c.out = *v;
  if (auto v = r.get<bool>("record_timing")) c.record_timing = *v;
  if (auto v = r.get<bool>("transcripts")) c.transcripts = *v;
  if (const json* v = r.raw("sweep")) parse_sweep(*v, c);
  r.finish();
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const ExperimentConfig& c) {
  json learner = {{"kind", to_string(c.learner.kind)},
                  {"base", to_string(c.learner.base)},
                  {"max_hints_per_round", c.learner.max_hints_per_round}};
  if (c.learner.hedge_eta) learner["hedge_eta"] = *c.learner.hedge_eta;
  if (c.doubling_range) {
    learner["sigma_min"] = c.learner.sigma_min;
    learner["sigma_max"] = c.learner.sigma_max;
  }
  json adversary = {{"kind", to_string(c.adversary.kind)},
                    {"delta", c.adversary.delta},
                    {"alternating", c.adversary.alternating}};
  if (c.adversary.kind == AdversaryKind::kCustomTable) {
    const IndexMatrix& table = c.adversary.table_hints;
    std::vector<std::vector<Index>> rows(static_cast<std::size_t>(table.rows()));
    for (Index t = 0; t < table.rows(); ++t) {
      for (Index k = 0; k < table.cols(); ++k) rows[static_cast<std::size_t>(t)].push_back(table(t, k));
    }
    adversary["table"] = {{"hints", rows}, {"labels", c.adversary.table_labels}};
    if (!c.adversary.table_instances.empty()) {
      adversary["table"]["instances"] = c.adversary.table_instances;
    }
  }
  json cls = {{"kind", c.cls.kind}, {"domain", c.cls.domain}, {"support", c.cls.support}};
  if (c.cls.d) cls["d"] = *c.cls.d;
  if (!c.cls.special.empty()) cls["special"] = c.cls.special;
  if (!c.cls.custom.is_null()) cls["custom"] = c.cls.custom;
  json doc = {{"schema", c.schema},
              {"experiment_id", c.experiment_id},
              {"learner", learner},
              {"adversary", adversary},
              {"class", cls},
              {"T", c.T},
              {"sigma", c.sigma},
              {"d", c.d},
              {"c_K", c.c_K},
              {"tie", to_string(c.tie)},
              {"loss", to_string(c.loss.kind)},
              {"seeds", c.seeds},
              {"out", c.out},
              {"record_timing", c.record_timing},
              {"transcripts", c.transcripts}};
  if (c.K) doc["K"] = *c.K;
  if (c.n) doc["n"] = *c.n;
  json sweep = json::object();
  if (!c.sweep.T.empty()) sweep["T"] = c.sweep.T;
  if (!c.sweep.sigma.empty()) sweep["sigma"] = c.sweep.sigma;
  if (!c.sweep.K.empty()) sweep["K"] = c.sweep.K;
  if (!c.sweep.n.empty()) sweep["n"] = c.sweep.n;
  if (!sweep.empty()) doc["sweep"] = sweep;
  return doc;
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  json doc = config_to_json(c);
  // Where results go and whether timing is kept do not change the game.
  doc.erase("out");
  doc.erase("record_timing");
  doc.erase("transcripts");
  const std::string text = doc.dump();
  return fnv1a(text.data(), text.size());
}

HypothesisClass build_class(const ExperimentConfig& c) {
  return as_config_error([&] {
    if (c.cls.kind == "partition") {
      return make_partition_class(FiniteDomain(c.cls.domain), c.cls.d.value_or(c.d), c.cls.support);
    }
    if (c.cls.kind == "shatter") {
      return make_shatter_class(FiniteDomain(c.cls.domain), c.cls.special);
    }
    try {
      return class_from_json(c.cls.custom);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("class.custom: ") + e.what());
    }
  });
}

std::string class_label(const ExperimentConfig& c) {
  std::ostringstream os;
  os << c.cls.kind << ':' << c.cls.domain;
  if (c.cls.kind == "partition") os << ':' << c.cls.d.value_or(c.d) << ':' << c.cls.support;
  if (c.cls.kind == "shatter") os << ':' << c.cls.special.size();
  return os.str();
}

GameSetup make_game_setup(const ExperimentConfig& c, const HypothesisClass& cls,
                          std::uint64_t seed, std::uint64_t run) {
  GameSetup s;
  s.cls = &cls;
  s.seed = seed;
  s.run = run;
  s.config_hash = config_hash(c);
  s.record_timing = c.record_timing;

  s.adversary = c.adversary;
  s.adversary.sigma = c.sigma;
  s.adversary.d = c.d;
  s.adversary.K = c.K.value_or(1);

  s.learner = c.learner;
  s.learner.T = c.T;
  s.learner.sigma = c.sigma;
  s.learner.c_K = c.c_K;
  s.learner.tie = c.tie;
  s.learner.loss = c.loss;
  s.learner.n = c.n;
  const bool alg1 = c.learner.kind == LearnerKind::kAlg1 ||
                    (c.learner.kind == LearnerKind::kDoubling && c.learner.base == LearnerKind::kAlg1);
  if (alg1) s.learner.K = c.K;
  if (c.learner.kind == LearnerKind::kDoubling && !c.doubling_range) {
    s.learner.sigma_min = s.learner.sigma_max = c.sigma;
  }
  return s;
}

void validate_config(const ExperimentConfig& c) {
  if (c.T < 0) throw ConfigError("T must be nonnegative");
  if (!(c.sigma > 0.0 && c.sigma <= 1.0)) throw ConfigError("sigma must lie in (0, 1]");
  if (c.d < 1) throw ConfigError("d must be positive");
  if (c.K && *c.K < 1) throw ConfigError("K must be positive");
  if (c.n && !(*c.n >= 0.0)) throw ConfigError("n must be nonnegative");
  if (c.seeds.empty()) throw ConfigError("at least one seed is required");
  if (learner_needs_hints(c.learner) && !transductive_adversary(c.adversary.kind)) {
    throw ConfigError("alg3 needs an adversary that reveals hints");
  }
  if (c.learner.kind == LearnerKind::kAlg2 && c.loss.kind != LossKind::kBinaryIndicator) {
    throw ConfigError("alg2 is played with the binary_indicator loss");
  }
  if ((c.learner.kind == LearnerKind::kAlg1 || c.learner.kind == LearnerKind::kAlg3) &&
      c.loss.kind == LossKind::kBinaryIndicator) {
    throw ConfigError("alg1 and alg3 predict in [-1, 1]; binary_indicator needs +-1");
  }
  for (Index T : c.sweep.T) {
    if (T < 0) throw ConfigError("sweep.T values must be nonnegative");
  }
  for (double s : c.sweep.sigma) {
    if (!(s > 0.0 && s <= 1.0)) throw ConfigError("sweep.sigma values must lie in (0, 1]");
  }
  for (Index K : c.sweep.K) {
    if (K < 1) throw ConfigError("sweep.K values must be positive");
  }
  for (double n : c.sweep.n) {
    if (!(n >= 0.0)) throw ConfigError("sweep.n values must be nonnegative");
  }
  // Dry construction catches what only the constructors know.
  const HypothesisClass cls = build_class(c);
  if (c.T == 0) return;
  const GameSetup s = make_game_setup(c, cls, 0, 0);
  as_config_error([&] {
    Adversary adversary(s.adversary, cls, c.T, Rng(0));
    make_learner(s.learner, cls, adversary.hints(), StreamBase{});
    return 0;
  });
}

}  // namespace sol

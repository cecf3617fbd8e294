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

#include "sol/transcript.hpp"

#include <cstdio>
#include <sstream>

namespace sol {

std::uint64_t label_commitment(Index t, Index x, double label) {
  const std::int64_t fields[2] = {static_cast<std::int64_t>(t),
                                  static_cast<std::int64_t>(x)};
  std::uint64_t h = fnv1a(fields, sizeof(fields));
  return fnv1a(&label, sizeof(label), h);
}

namespace {

nlohmann::json stats_json(const OracleStats& s) {
  return {{"call_count", s.call_count},
          {"total_input_length", s.total_input_length},
          {"max_input_length", s.max_input_length}};
}

// %.17g round-trips doubles and does not depend on the locale's stream state.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json transcript_to_json(const Transcript& tr, bool with_timing) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : tr.rounds) {
    nlohmann::json j = {{"t", r.t},
                        {"x", r.x},
                        {"prediction", r.prediction},
                        {"label", r.label},
                        {"loss", r.loss},
                        {"oracle_calls", r.oracle_calls},
                        {"input_length", r.input_length},
                        {"commitment", r.commitment}};
    if (with_timing) j["wall_ns"] = r.wall_ns;
    rounds.push_back(std::move(j));
  }
  return {{"seed", tr.seed},
          {"config_hash", tr.config_hash},
          {"total_loss", tr.total_loss},
          {"bih_loss", tr.bih_loss},
          {"bih_hypothesis", tr.bih_hypothesis},
          {"regret", tr.regret},
          {"learner_stats", stats_json(tr.learner_stats)},
          {"final_stats", stats_json(tr.final_stats)},
          {"rounds", std::move(rounds)}};
}

std::string transcript_to_csv(const Transcript& tr, bool with_timing) {
  std::ostringstream out;
  out << "t,x,prediction,label,loss,oracle_calls,input_length,commitment";
  if (with_timing) out << ",wall_ns";
  out << '\n';
  for (const auto& r : tr.rounds) {
    out << r.t << ',' << r.x << ',' << fmt(r.prediction) << ','
        << fmt(r.label) << ',' << fmt(r.loss) << ',' << r.oracle_calls << ','
        << r.input_length << ',' << r.commitment;
    if (with_timing) out << ',' << r.wall_ns;
    out << '\n';
  }
  return out.str();
}

}  // namespace sol

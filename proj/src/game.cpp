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

#include "sol/game.hpp"

#include <chrono>
#include <cmath>

#include "sol/errors.hpp"

namespace sol {

Transcript play_game(const GameSetup& setup, const RoundObserver& observer) {
  if (setup.cls == nullptr) throw InputError("game needs a hypothesis class");
  const HypothesisClass& cls = *setup.cls;
  const Index T = setup.learner.T;
  const LossSpec& loss = setup.learner.loss;

  Transcript tr;
  tr.seed = setup.seed;
  tr.config_hash = setup.config_hash;
  if (T == 0) return tr;

  Adversary adversary(setup.adversary, cls, T,
                      Rng(StreamKey{setup.seed, setup.run, 0,
                                    static_cast<std::uint64_t>(Purpose::kAdversarySetup)}));
  const StreamBase streams{setup.seed, setup.run, 0};
  auto learner = make_learner(setup.learner, cls, adversary.hints(), streams);

  ExampleMultiset sequence;
  tr.rounds.reserve(static_cast<std::size_t>(T));
  for (Index t = 1; t <= T; ++t) {
    Rng adv_rng(StreamKey{setup.seed, setup.run, static_cast<std::uint64_t>(t),
                          static_cast<std::uint64_t>(Purpose::kAdversary)});
    const RoundPlan plan = adversary.next_round(t, tr, adv_rng);
    certify_round(plan, adversary.hints(), t);
    check_label(loss, plan.y);

    RoundRecord rec;
    rec.t = t;
    rec.x = plan.x;
    rec.commitment = label_commitment(t, plan.x, plan.y);

    const OracleStats before = learner->oracle_stats();
    const auto start = std::chrono::steady_clock::now();
    rec.prediction = learner->predict(t, plan.x);
    const auto stop = std::chrono::steady_clock::now();
    const OracleStats after = learner->oracle_stats();
    if (!(std::abs(rec.prediction) <= 1.0)) {
      throw ContractViolation("prediction outside [-1, 1] at round " +
                              std::to_string(t));
    }
    rec.oracle_calls = after.call_count - before.call_count;
    rec.input_length = after.total_input_length - before.total_input_length;
    if (setup.record_timing) {
      rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start)
                        .count();
    }

    rec.label = plan.y;
    rec.loss = loss_eval(loss, rec.prediction, rec.label);
    learner->observe(t, {plan.x, plan.y});
    sequence.add({plan.x, plan.y});
    tr.total_loss += rec.loss;
    tr.rounds.push_back(rec);
    if (observer) observer(tr.rounds.back(), *learner);
  }

  Oracle final_oracle(cls);
  const auto best = final_oracle.erm(sequence, loss);
  tr.bih_loss = best.value;
  tr.bih_hypothesis = best.hypothesis;
  tr.final_stats = final_oracle.stats();
  tr.learner_stats = learner->oracle_stats();
  tr.regret = tr.total_loss - tr.bih_loss;
  return tr;
}

}  // namespace sol

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

#ifndef SOL_GAME_HPP_
#define SOL_GAME_HPP_

#include <cstdint>
#include <functional>

#include "sol/adversary.hpp"
#include "sol/learner.hpp"
#include "sol/transcript.hpp"

namespace sol {

struct GameSetup {
  const HypothesisClass* cls = nullptr;
  AdversarySpec adversary;
  LearnerSpec learner;  // learner.T and learner.loss drive the game
  std::uint64_t seed = 0;
  std::uint64_t run = 0;
  std::uint64_t config_hash = 0;
  bool record_timing = false;
};

// Called after each round with the learner, for tests that inspect state.
using RoundObserver = std::function<void(const RoundRecord&, const Learner&)>;

/// Plays T rounds. Per round: the adversary commits (distribution, x_t, y_t)
/// and the commitment hash is recorded, the certificate is checked, then the
/// learner predicts and finally sees the label. The best fixed hypothesis is
/// found by one extra ERM call on a separate oracle, reported as final_stats.
Transcript play_game(const GameSetup& setup, const RoundObserver& observer = {});

}  // namespace sol

#endif  // SOL_GAME_HPP_

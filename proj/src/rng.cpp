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

#include "sol/rng.hpp"

#include <algorithm>

#include "sol/errors.hpp"

namespace sol {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng::Rng(const StreamKey& key) {
  const std::uint64_t words[4] = {key.seed, key.run, key.round, key.purpose};
  std::vector<std::uint32_t> parts;
  parts.reserve(8);
  for (std::uint64_t w : words) {
    parts.push_back(static_cast<std::uint32_t>(w));
    parts.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  std::seed_seq seq(parts.begin(), parts.end());
  engine_.seed(seq);
}

Index Rng::uniform_index(Index n) {
  if (n <= 0) throw InputError("uniform_index: n must be positive");
  // Lemire's multiply-and-reject.
  const auto range = static_cast<std::uint64_t>(n);
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<Index>(m >> 64);
}

CategoricalSampler::CategoricalSampler(
    const Eigen::Ref<const Eigen::VectorXd>& probs) {
  if (probs.size() == 0) throw InputError("categorical: empty distribution");
  cumulative_.resize(static_cast<std::size_t>(probs.size()));
  double acc = 0.0;
  for (Index i = 0; i < probs.size(); ++i) {
    if (probs(i) < 0.0) throw InputError("categorical: negative probability");
    acc += probs(i);
    cumulative_[static_cast<std::size_t>(i)] = acc;
  }
  if (acc <= 0.0) throw InputError("categorical: zero total mass");
  for (double& c : cumulative_) c /= acc;
  cumulative_.back() = 1.0;
}

Index CategoricalSampler::operator()(Rng& rng) const {
  const double u = rng.uniform01();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  auto i = static_cast<Index>(it - cumulative_.begin());
  if (i >= size()) i = size() - 1;
  return i;
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace sol

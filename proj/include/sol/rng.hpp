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

#ifndef SOL_RNG_HPP_
#define SOL_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace sol {

using Index = Eigen::Index;

// Purpose tags keep adversary and learner randomness on disjoint streams.
enum class Purpose : std::uint32_t {
  kAdversarySetup = 1,
  kAdversary = 2,
  kLearnerHints = 3,
  kLearnerTies = 4,
  kHedge = 5,
  kMeta = 6,
  kVerify = 7,
};

// A stream is identified by (seed, run, round, purpose). Experts inside a
// meta-learner fold their index into `purpose` via `sub_purpose`.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t run = 0;
  std::uint64_t round = 0;
  std::uint64_t purpose = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

constexpr std::uint64_t sub_purpose(Purpose p, std::uint64_t sub) {
  return static_cast<std::uint64_t>(p) | (sub << 16);
}

/// Random stream backed by std::mt19937_64. Keyed construction goes through
/// std::seed_seq, whose mixing is fixed by the standard, so a key yields the
/// same sequence on every conforming implementation. The sampling helpers
/// below avoid std:: distributions, whose algorithms are unspecified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);
  explicit Rng(const StreamKey& key);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on {0, ..., n-1}; n must be positive.
  Index uniform_index(Index n);
  double rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }
  bool bernoulli(double p) { return uniform01() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a fixed probability vector.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const Eigen::Ref<const Eigen::VectorXd>& probs);
  Index operator()(Rng& rng) const;
  Index size() const { return static_cast<Index>(cumulative_.size()); }

 private:
  std::vector<double> cumulative_;
};

// 64-bit FNV-1a, used for config hashes and label commitments.
std::uint64_t fnv1a(const void* data, std::size_t len,
                    std::uint64_t h = 1469598103934665603ULL);

}  // namespace sol

#endif  // SOL_RNG_HPP_

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

#ifndef SOL_RADEMACHER_HPP_
#define SOL_RADEMACHER_HPP_

#include <bit>
#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "sol/core.hpp"
#include "sol/errors.hpp"
#include "sol/rng.hpp"

namespace sol {

// Exact enumeration handles at most this many points (2^16 sign patterns).
inline constexpr Index kMaxExactRademacher = 16;

/// Σ over all 2^|z| sign patterns ε of max_h { Σ_i ε_i values(h, z_i) + phi(h) }.
/// Patterns are visited in Gray-code order so each step is one column axpy.
/// Dividing by 2^|z| gives 𝔑(phi, z); with an integer Scalar the sum is exact.
template <typename Scalar>
Scalar rademacher_sum(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& values,
    std::span<const Index> z,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& phi) {
  const auto m = static_cast<Index>(z.size());
  if (m > kMaxExactRademacher) {
    throw CapacityError("exact Rademacher enumeration is limited to 16 points");
  }
  if (phi.size() != values.rows()) {
    throw InputError("regularizer must have one entry per hypothesis");
  }
  for (Index zi : z) {
    if (zi < 0 || zi >= values.cols()) throw InputError("point outside the domain");
  }
  // Start from ε = (-1, ..., -1).
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s = phi;
  for (Index zi : z) s -= values.col(zi);
  std::uint32_t eps_plus = 0;  // bit i set <=> ε_i = +1
  Scalar total = s.maxCoeff();
  const std::uint32_t patterns = std::uint32_t{1} << m;
  for (std::uint32_t k = 1; k < patterns; ++k) {
    const int j = std::countr_zero(k);
    eps_plus ^= std::uint32_t{1} << j;
    if ((eps_plus >> j) & 1U) {
      s += Scalar(2) * values.col(z[static_cast<std::size_t>(j)]);
    } else {
      s -= Scalar(2) * values.col(z[static_cast<std::size_t>(j)]);
    }
    total += s.maxCoeff();
  }
  return total;
}

// 𝔑(phi, z) by exact enumeration in double precision.
double rademacher_exact(const HypothesisClass& cls, std::span<const Index> z,
                        const Eigen::Ref<const Eigen::VectorXd>& phi);

struct MonteCarloValue {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

MonteCarloValue rademacher_mc(const HypothesisClass& cls,
                              std::span<const Index> z,
                              const Eigen::Ref<const Eigen::VectorXd>& phi,
                              std::int64_t trials, Rng& rng);

// Smallest k <= max_exponent such that every entry of `values` and `phi`
// times 2^k is an integer of magnitude below 2^magnitude_bits; nullopt
// otherwise. The default 36 bits keeps sums over 17 points and 2^16 sign
// patterns inside int64; 100 bits does the same for __int128.
std::optional<int> dyadic_exponent(const Eigen::MatrixXd& values,
                                   const Eigen::VectorXd& phi,
                                   int max_exponent = 20, int magnitude_bits = 36);

}  // namespace sol

#endif  // SOL_RADEMACHER_HPP_

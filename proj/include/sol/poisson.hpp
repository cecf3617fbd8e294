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

#ifndef SOL_POISSON_HPP_
#define SOL_POISSON_HPP_

#include <cstdint>

#include "sol/rng.hpp"

namespace sol {

// Exact Poisson draw. Sequential inversion below mean 30, PTRS (Hörmann 1993,
// transformed rejection with squeeze) above.
std::int64_t poisson_sample(double mean, Rng& rng);

double poisson_pmf(std::int64_t k, double mean);
double poisson_log_pmf(std::int64_t k, double mean);

// Smallest k with P(N > k) < tail, found by summing the pmf upward.
std::int64_t poisson_upper_cutoff(double mean, double tail);

}  // namespace sol

#endif  // SOL_POISSON_HPP_

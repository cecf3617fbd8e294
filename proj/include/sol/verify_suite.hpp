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

#ifndef SOL_VERIFY_SUITE_HPP_
#define SOL_VERIFY_SUITE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sol/verify.hpp"

namespace sol {

struct SuiteOptions {
  std::uint64_t seed = 20260101;
  int jobs = 1;
};

// coupling, tv, chi2, monotonicity, admissibility, budgets, generalization.
const std::vector<std::string>& suite_names();

// Runs one named suite, or every suite for "all". Unknown names throw
// InputError. Each suite draws from its own stream, so results do not depend
// on which other suites run or on `jobs`.
std::vector<VerificationReport> run_suite(const std::string& name,
                                          const SuiteOptions& options = {});

// Individual suites.
std::vector<VerificationReport> check_coupling(std::uint64_t seed);
std::vector<VerificationReport> check_tv(std::uint64_t seed);
std::vector<VerificationReport> check_chi2(std::uint64_t seed);
std::vector<VerificationReport> check_monotonicity(std::uint64_t seed);
std::vector<VerificationReport> check_admissibility(std::uint64_t seed);
std::vector<VerificationReport> check_budgets(std::uint64_t seed);
std::vector<VerificationReport> check_generalization(std::uint64_t seed);

// Smooth distributions used across the divergence checks: uniform, a
// half-support vertex, a point mass and two random draws.
std::vector<Eigen::VectorXd> test_distributions(Index domain_size, Rng& rng);

}  // namespace sol

#endif  // SOL_VERIFY_SUITE_HPP_

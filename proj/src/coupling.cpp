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

#include <cmath>
#include <vector>

#include "sol/errors.hpp"
#include "sol/verify.hpp"

namespace sol {

namespace {

void check_ratio(const Eigen::Ref<const Eigen::VectorXd>& P,
                 const Eigen::Ref<const Eigen::VectorXd>& Q, double sigma) {
  if (P.size() != Q.size()) throw InputError("P and Q must share a domain");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw InputError("sigma must lie in (0, 1]");
  check_probability_vector(P);
  check_probability_vector(Q);
  for (Index x = 0; x < P.size(); ++x) {
    if (P(x) == 0.0) continue;
    if (Q(x) == 0.0) throw InputError("P is not absolutely continuous w.r.t. Q");
    if (sigma * P(x) / Q(x) > 1.0 + 1e-12) {
      throw InputError("likelihood ratio dP/dQ exceeds 1/sigma");
    }
  }
}

double tv(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 0.5 * (a - b).cwiseAbs().sum();
}

}  // namespace

CouplingDraw coupling_select(std::span<const Index> samples,
                             const Eigen::Ref<const Eigen::VectorXd>& P,
                             const Eigen::Ref<const Eigen::VectorXd>& Q,
                             double sigma, Rng& rng) {
  check_ratio(P, Q, sigma);
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Index x = samples[i];
    if (x < 0 || x >= P.size()) throw InputError("sample outside the domain");
    if (Q(x) == 0.0) throw InputError("sample has zero probability under Q");
    const double p = std::min(1.0, sigma * P(x) / Q(x));
    if (rng.bernoulli(p)) hits.push_back(i);
  }
  CouplingDraw out;
  if (hits.empty()) return out;
  out.success = true;
  out.index = hits[static_cast<std::size_t>(rng.uniform_index(static_cast<Index>(hits.size())))];
  return out;
}

VerificationReport coupling_montecarlo(const Eigen::Ref<const Eigen::VectorXd>& P,
                                       const Eigen::Ref<const Eigen::VectorXd>& Q,
                                       double sigma, Index m, std::int64_t trials,
                                       Rng& rng, const CouplingTolerances& tol) {
  check_ratio(P, Q, sigma);
  if (m < 1 || trials < 1) throw InputError("coupling check needs m, trials >= 1");
  const Index n = P.size();
  constexpr Index kBuckets = 4;
  const CategoricalSampler draw_q(Q);
  std::vector<Index> samples(static_cast<std::size_t>(m));
  std::int64_t failures = 0;
  Eigen::VectorXd law = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd bucket_law = Eigen::MatrixXd::Zero(n, kBuckets);
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    Index total = 0;
    for (auto& s : samples) {
      s = draw_q(rng);
      total += s;
    }
    const auto c = coupling_select(samples, P, Q, sigma, rng);
    if (!c.success) {
      ++failures;
      continue;
    }
    const Index xi = samples[*c.index];
    law(xi) += 1.0;
    bucket_law(xi, (total - xi) % kBuckets) += 1.0;
  }

  const double expected = std::pow(1.0 - sigma, static_cast<double>(m));
  const double rate = static_cast<double>(failures) / static_cast<double>(trials);
  const double band = tol.band_sigmas *
                      std::sqrt(expected * (1.0 - expected) / static_cast<double>(trials));
  const double successes = law.sum();
  const double tv_all = successes > 0 ? tv(law / successes, P) : 1.0;
  double tv_bucket = 0.0;
  nlohmann::json per_bucket = nlohmann::json::array();
  for (Index b = 0; b < kBuckets; ++b) {
    const double count = bucket_law.col(b).sum();
    const double v = count > 0 ? tv(bucket_law.col(b) / count, P) : 0.0;
    per_bucket.push_back({{"bucket", b}, {"count", count}, {"tv", v}});
    tv_bucket = std::max(tv_bucket, v);
  }

  VerificationReport r;
  r.name = "coupling";
  r.mode = "monte_carlo";
  r.trials = trials;
  r.bound = expected;
  r.tolerance = tol.tv;
  r.ci_halfwidth = band;
  r.measured = {{"failure_rate", rate},
                {"failure_expected", expected},
                {"conditional_tv", tv_all},
                {"max_bucket_tv", tv_bucket},
                {"buckets", per_bucket},
                {"sigma", sigma},
                {"m", m}};
  const bool rate_ok = std::abs(rate - expected) <= band;
  const bool tv_ok = tv_all <= tol.tv;
  const bool bucket_ok = tv_bucket <= tol.stratified_tv;
  r.passed = rate_ok && tv_ok && bucket_ok;
  if (!rate_ok) r.detail += "failure rate outside the binomial band; ";
  if (!tv_ok) r.detail += "conditional law of X_I differs from P; ";
  if (!bucket_ok) r.detail += "stratified conditional law differs from P; ";
  return r;
}

}  // namespace sol

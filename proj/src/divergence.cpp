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
#include "sol/poisson.hpp"
#include "sol/verify.hpp"

namespace sol {

namespace {

// Allowance for floating-point rounding in the truncated sums: pmf entries
// come from a forward recurrence with relative error below k·2^-52.
constexpr double kRoundingAllowance = 1e-12;

struct PoissonTable {
  std::vector<double> pmf;  // P(N = k) for k = 0..M
  double tail = 0.0;        // P(N > M)
  double tail_first = 0.0;  // E[N 1{N > M}]
  double tail_second = 0.0; // E[N² 1{N > M}]
};

// P(N = k) by p(k) = p(k-1) λ/k. Below λ = 600 the start e^{-λ} is a normal
// double; above, the recurrence starts at the mode from lgamma.
std::vector<double> pmf_range(double lambda, std::int64_t last) {
  std::vector<double> p(static_cast<std::size_t>(last + 1), 0.0);
  if (lambda < 600.0) {
    p[0] = std::exp(-lambda);
    for (std::int64_t k = 1; k <= last; ++k) {
      p[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k - 1)] * lambda / static_cast<double>(k);
    }
    return p;
  }
  const auto mode = std::min<std::int64_t>(last, static_cast<std::int64_t>(lambda));
  p[static_cast<std::size_t>(mode)] = poisson_pmf(mode, lambda);
  for (std::int64_t k = mode + 1; k <= last; ++k) {
    p[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k - 1)] * lambda / static_cast<double>(k);
  }
  for (std::int64_t k = mode - 1; k >= 0; --k) {
    p[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k + 1)] * static_cast<double>(k + 1) / lambda;
  }
  return p;
}

PoissonTable poisson_table(double lambda, double tail_target) {
  const std::int64_t cutoff = poisson_upper_cutoff(lambda, tail_target);
  // The tail moments are summed explicitly far past the cutoff, where terms
  // fall below 1e-300 relative to the head.
  const std::int64_t far =
      cutoff + 50 + static_cast<std::int64_t>(20.0 * std::sqrt(lambda + 1.0));
  const auto all = pmf_range(lambda, far);
  PoissonTable t;
  t.pmf.assign(all.begin(), all.begin() + cutoff + 1);
  for (std::int64_t k = cutoff + 1; k <= far; ++k) {
    const double p = all[static_cast<std::size_t>(k)];
    const double kd = static_cast<double>(k);
    t.tail += p;
    t.tail_first += kd * p;
    t.tail_second += kd * kd * p;
  }
  return t;
}

void check_mixture_inputs(double n, Index domain_size,
                          const Eigen::Ref<const Eigen::VectorXd>& D) {
  FiniteDomain domain(domain_size);
  if (!(n >= 0.0) || !std::isfinite(n)) throw InputError("n must be finite and >= 0");
  if (D.size() != domain_size) throw InputError("D must have one entry per instance");
  check_probability_vector(D);
}

// Running Neumaier sum.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

// Enumerates the coordinates carrying positive D-weight and accumulates
// E|R - 1| and E R² over the truncated box, R = Σ D_i n_i / λ.
struct MixtureMoments {
  double abs_dev = 0.0;
  double second = 0.0;
  Index coords = 0;
  PoissonTable table;
};

MixtureMoments mixture_moments(double lambda, const Eigen::VectorXd& weights,
                               double tail_target) {
  MixtureMoments out;
  out.coords = weights.size();
  out.table = poisson_table(lambda, tail_target);
  const auto& p = out.table.pmf;
  const auto M = static_cast<std::int64_t>(p.size()) - 1;
  CompensatedSum abs_sum, sq_sum;
  std::vector<double> step(static_cast<std::size_t>(weights.size()));
  for (Index i = 0; i < weights.size(); ++i) step[static_cast<std::size_t>(i)] = weights(i) / lambda;

  // Odometer over the box; the innermost coordinate runs in a tight loop.
  const Index m = weights.size();
  std::vector<std::int64_t> k(static_cast<std::size_t>(m), 0);
  std::vector<double> w(static_cast<std::size_t>(m + 1), 1.0), r(static_cast<std::size_t>(m + 1), 0.0);
  const std::size_t last = static_cast<std::size_t>(m - 1);
  auto refresh = [&](std::size_t from) {
    for (std::size_t i = from; i < last; ++i) {
      w[i + 1] = w[i] * p[static_cast<std::size_t>(k[i])];
      r[i + 1] = r[i] + step[i] * static_cast<double>(k[i]);
    }
  };
  refresh(0);
  while (true) {
    double a = 0.0, s = 0.0;
    for (std::int64_t j = 0; j <= M; ++j) {
      const double wj = p[static_cast<std::size_t>(j)];
      const double rj = r[last] + step[last] * static_cast<double>(j);
      a += wj * std::abs(rj - 1.0);
      s += wj * rj * rj;
    }
    abs_sum.add(w[last] * a);
    sq_sum.add(w[last] * s);
    std::size_t i = last;
    while (i > 0) {
      --i;
      if (++k[i] <= M) break;
      k[i] = 0;
      if (i == 0) {
        out.abs_dev = abs_sum.value();
        out.second = sq_sum.value();
        return out;
      }
    }
    if (last == 0) {
      out.abs_dev = abs_sum.value();
      out.second = sq_sum.value();
      return out;
    }
    refresh(i);
  }
}

Eigen::VectorXd positive_part(const Eigen::Ref<const Eigen::VectorXd>& D) {
  std::vector<double> kept;
  for (Index i = 0; i < D.size(); ++i) {
    if (D(i) > 0.0) kept.push_back(D(i));
  }
  return Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Index>(kept.size()));
}

void check_labeling(std::span<const int> labeling, Index domain_size) {
  if (static_cast<Index>(labeling.size()) != domain_size) {
    throw InputError("labeling must have one entry per instance");
  }
  for (int y : labeling) {
    if (y != 1 && y != -1) throw InputError("labeling entries must be +-1");
  }
}

}  // namespace

BoundedValue tv_exact_poisson(double n, Index domain_size,
                              const Eigen::Ref<const Eigen::VectorXd>& D,
                              std::span<const int> labeling) {
  check_mixture_inputs(n, domain_size, D);
  check_labeling(labeling, domain_size);
  if (domain_size > kMaxTvDomain) {
    throw CapacityError("exact Poisson TV is limited to |X| <= 4");
  }
  if (n == 0.0) return {1.0, 0.0};
  const double lambda = n / (2.0 * static_cast<double>(domain_size));
  // Every coordinate is Poi(λ) whatever its label, so the labeling picks
  // which coordinates move without changing the law being enumerated.
  const Eigen::VectorXd w = positive_part(D);
  const auto m = static_cast<double>(w.size());
  const auto mom = mixture_moments(lambda, w, kPoissonTruncation);
  const auto& t = mom.table;
  const double err =
      0.5 * (m * t.tail + t.tail_first / lambda + (m - 1.0) * t.tail) +
      kRoundingAllowance;
  return {0.5 * mom.abs_dev, err};
}

MonteCarloValue tv_montecarlo_poisson(double n, Index domain_size,
                                      const Eigen::Ref<const Eigen::VectorXd>& D,
                                      std::span<const int> labeling,
                                      std::int64_t samples, Rng& rng) {
  check_mixture_inputs(n, domain_size, D);
  check_labeling(labeling, domain_size);
  if (samples < 2) throw InputError("Monte Carlo needs at least 2 samples");
  if (n == 0.0) return {1.0, 0.0, samples};
  const double lambda = n / (2.0 * static_cast<double>(domain_size));
  double sum = 0.0, sum_sq = 0.0;
  Eigen::MatrixXd counts(2, domain_size);  // row 0: label +1, row 1: label -1
  for (std::int64_t s = 0; s < samples; ++s) {
    for (Index x = 0; x < domain_size; ++x) {
      counts(0, x) = static_cast<double>(poisson_sample(lambda, rng));
      counts(1, x) = static_cast<double>(poisson_sample(lambda, rng));
    }
    double ratio = 0.0;
    for (Index x = 0; x < domain_size; ++x) {
      ratio += D(x) * counts(labeling[static_cast<std::size_t>(x)] > 0 ? 0 : 1, x) / lambda;
    }
    const double v = 0.5 * std::abs(ratio - 1.0);
    sum += v;
    sum_sq += v * v;
  }
  const double k = static_cast<double>(samples);
  const double mean = sum / k;
  return {mean, std::sqrt(std::max(0.0, sum_sq / k - mean * mean) / (k - 1)), samples};
}

double chi2_mixture(double n, Index domain_size,
                    const Eigen::Ref<const Eigen::VectorXd>& D) {
  check_mixture_inputs(n, domain_size, D);
  if (n <= 0.0) throw InputError("chi2_mixture needs n > 0");
  return 2.0 * static_cast<double>(domain_size) / n * D.squaredNorm();
}

BoundedValue chi2_direct(double n, Index domain_size,
                         const Eigen::Ref<const Eigen::VectorXd>& D) {
  check_mixture_inputs(n, domain_size, D);
  if (n <= 0.0) throw InputError("chi2_direct needs n > 0");
  if (domain_size > 3) throw CapacityError("direct chi-square is limited to |X| <= 3");
  const double lambda = n / (2.0 * static_cast<double>(domain_size));
  const Eigen::VectorXd w = positive_part(D);
  const auto m = static_cast<double>(w.size());
  const auto mom = mixture_moments(lambda, w, 1e-16);
  const auto& t = mom.table;
  const double err = t.tail_second / (lambda * lambda) +
                     (1.0 + 1.0 / lambda) * (m - 1.0) * t.tail +
                     kRoundingAllowance * (1.0 + 1.0 / lambda);
  return {mom.second - 1.0, err};
}

BoundedValue shifted_poisson_tv(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InputError("lambda must be finite and >= 0");
  }
  if (lambda == 0.0) return {1.0, 0.0};
  const auto t = poisson_table(lambda, 1e-16);
  CompensatedSum sum;
  double prev = 0.0;
  for (double p : t.pmf) {
    sum.add(std::abs(p - prev));
    prev = p;
  }
  // Past the mode the pmf decreases to 0, so the omitted terms telescope to
  // exactly p(M).
  sum.add(prev);
  return {0.5 * sum.value(), kRoundingAllowance};
}

double eta_budget(double n, double sigma, int d, Index T, double c) {
  if (!(n > 0.0)) throw InputError("eta_budget needs n > 0");
  if (T < 2) throw InputError("eta_budget needs T >= 2");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw InputError("sigma must lie in (0, 1]");
  if (d < 1) throw InputError("d must be >= 1");
  if (!(c >= 0.0)) throw InputError("c must be >= 0");
  const double ns = n * sigma;
  const double lt = std::log(static_cast<double>(T));
  const double t = static_cast<double>(T);
  return 1.0 / std::sqrt(ns) + c * std::sqrt(d * lt / ns) +
         ns / (4.0 * t * t * lt) + std::exp(-n / 8.0);
}

double beta_budget(Index T, Index K, double sigma) {
  if (T < 1 || K < 1) throw InputError("beta_budget needs T, K >= 1");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw InputError("sigma must lie in (0, 1]");
  return 10.0 * static_cast<double>(T) * static_cast<double>(K) *
         std::pow(1.0 - sigma, static_cast<double>(K));
}

}  // namespace sol

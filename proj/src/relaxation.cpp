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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "sol/errors.hpp"
#include "sol/oracle.hpp"
#include "sol/poisson.hpp"
#include "sol/verify.hpp"

__extension__ typedef __int128 Int128;

namespace Eigen {
template <>
struct NumTraits<Int128> : GenericNumTraits<Int128> {};
}  // namespace Eigen

namespace sol {

namespace {

constexpr double kSlackTolerance = 1e-12;

// Φ(h) = -Σ l(h(x_i), y_i) / (2G).
Eigen::VectorXd negative_scaled_loss(const HypothesisClass& cls,
                                     std::span<const LabeledExample> history,
                                     const LossSpec& loss) {
  Eigen::ArrayXd total = Eigen::ArrayXd::Zero(cls.size());
  for (const auto& s : history) {
    check_label(loss, s.y);
    total += loss_column(loss, cls.values().col(s.x), s.y);
  }
  return (-total / (2.0 * loss.lipschitz_G)).matrix();
}

std::vector<Index> future_hints(const HintSchedule& hints, Index t) {
  std::vector<Index> z;
  for (Index u = t + 1; u <= hints.rounds(); ++u) {
    const auto row = hints.row(u);
    z.insert(z.end(), row.begin(), row.end());
  }
  return z;
}

Rng& require_rng(Rng* rng) {
  if (rng == nullptr) throw InputError("Monte Carlo relaxation needs an rng");
  return *rng;
}

double regularized_sup(const HypothesisClass& cls, std::span<const Index> z,
                       const Eigen::VectorXd& phi, Rng& rng) {
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(cls.domain_size());
  for (Index zi : z) weights(zi) += rng.rademacher();
  return (cls.values() * weights + phi).maxCoeff();
}

}  // namespace

double inf_total_loss(const HypothesisClass& cls,
                      std::span<const LabeledExample> history,
                      const LossSpec& loss) {
  return -negative_scaled_loss(cls, history, loss).maxCoeff() * 2.0 * loss.lipschitz_G;
}

RelaxationValue relaxation_value(const RelaxationParams& params,
                                 const HypothesisClass& cls,
                                 std::span<const LabeledExample> history,
                                 const HintSchedule* hints, Rng* rng) {
  if (params.t < 0 || params.t > params.T) throw InputError("need 0 <= t <= T");
  if (static_cast<Index>(history.size()) != params.t) {
    throw InputError("history length must equal t");
  }
  const double G = params.loss.lipschitz_G;
  const Index remaining = params.T - params.t;
  RelaxationValue out;

  switch (params.mode) {
    case RelaxationMode::kTransductive: {
      if (hints == nullptr || hints->rounds() != params.T) {
        throw InputError("transductive relaxation needs a T-row hint schedule");
      }
      const auto phi = negative_scaled_loss(cls, history, params.loss);
      const auto z = future_hints(*hints, params.t);
      if (static_cast<Index>(z.size()) <= kMaxExactRademacher) {
        out.value = 2.0 * G * rademacher_exact(cls, z, phi);
      } else {
        const auto mc = rademacher_mc(cls, z, phi, params.trials, require_rng(rng));
        out = {2.0 * G * mc.mean, 2.0 * G * mc.std_error, false};
      }
      return out;
    }
    case RelaxationMode::kSmoothedReal: {
      const auto phi = negative_scaled_loss(cls, history, params.loss);
      const Index v = params.K * remaining;
      const double beta_term =
          remaining > 0 ? 2.0 * G * beta_budget(params.T, params.K, params.sigma) *
                              static_cast<double>(remaining)
                        : 0.0;
      const double tuples = std::pow(static_cast<double>(cls.domain_size()),
                                     static_cast<double>(v));
      if (v <= 12 && tuples <= 4096.0) {
        // Exact: every V ∈ X^v is equally likely.
        std::vector<Index> z(static_cast<std::size_t>(v), 0);
        double sum = 0.0;
        const auto count = static_cast<std::int64_t>(tuples);
        for (std::int64_t code = 0; code < count; ++code) {
          std::int64_t c = code;
          for (auto& zi : z) {
            zi = c % cls.domain_size();
            c /= cls.domain_size();
          }
          sum += rademacher_exact(cls, z, phi);
        }
        out.value = 2.0 * G * sum / static_cast<double>(count) + beta_term;
        return out;
      }
      Rng& r = require_rng(rng);
      std::vector<Index> z(static_cast<std::size_t>(v));
      double s = 0.0, s2 = 0.0;
      for (std::int64_t i = 0; i < params.trials; ++i) {
        for (auto& zi : z) zi = r.uniform_index(cls.domain_size());
        const double val = regularized_sup(cls, z, phi, r);
        s += val;
        s2 += val * val;
      }
      const double k = static_cast<double>(params.trials);
      const double mean = s / k;
      out.value = 2.0 * G * mean + beta_term;
      out.std_error = 2.0 * G * std::sqrt(std::max(0.0, s2 / k - mean * mean) / (k - 1));
      out.exact = false;
      return out;
    }
    case RelaxationMode::kFtpl: {
      // sup_h(-Σ L̃ - Σ L) with L(h,s) = -y h(x)/2 is max_h ½ Σ y h(x).
      Eigen::VectorXd weights = Eigen::VectorXd::Zero(cls.domain_size());
      for (const auto& s : history) {
        if (!is_sign(s.y)) throw InputError("ftpl relaxation needs labels in {-1, +1}");
        weights(s.x) += s.y;
      }
      double eta_term = 0.0;
      if (remaining > 0) {
        const double eta = params.eta ? *params.eta
                                      : eta_budget(params.n, params.sigma, params.d,
                                                   params.T, params.c);
        eta_term = eta * static_cast<double>(remaining);
      }
      if (params.n == 0.0) {
        out.value = 0.5 * (cls.values() * weights).maxCoeff() + eta_term;
        return out;
      }
      Rng& r = require_rng(rng);
      double s = 0.0, s2 = 0.0;
      Eigen::VectorXd w(cls.domain_size());
      for (std::int64_t i = 0; i < params.trials; ++i) {
        w = weights;
        const auto count = poisson_sample(params.n, r);
        for (std::int64_t j = 0; j < count; ++j) {
          const Index x = r.uniform_index(cls.domain_size());
          w(x) += r.rademacher();
        }
        const double val = 0.5 * (cls.values() * w).maxCoeff();
        s += val;
        s2 += val * val;
      }
      const double k = static_cast<double>(params.trials);
      const double mean = s / k;
      out.value = mean + eta_term;
      out.std_error = std::sqrt(std::max(0.0, s2 / k - mean * mean) / (k - 1));
      out.exact = false;
      return out;
    }
  }
  throw InputError("unknown relaxation mode");
}

VerificationReport admissibility_check(LearnerKind learner,
                                       const AdmissibilityInstance& instance) {
  if (instance.cls == nullptr) throw InputError("admissibility needs a class");
  const HypothesisClass& cls = *instance.cls;
  const HintSchedule& hints = instance.hints;
  const Index T = hints.rounds();
  if (cls.domain_size() > 4 || T > 3 || hints.width() > 2 || cls.size() > 8) {
    throw CapacityError("admissibility check limited to |X|<=4, T<=3, K<=2, |H|<=8");
  }
  if (!cls.binary()) throw InputError("admissibility check needs a binary class");
  if (learner != LearnerKind::kAlg3 && learner != LearnerKind::kFtl) {
    throw InputError("admissibility check supports alg3 and ftl");
  }
  if (instance.tie == TiePolicy::kSeededRandom) {
    throw InputError("admissibility check needs a deterministic tie policy");
  }
  const LossSpec& loss = instance.loss;

  RelaxationParams params;
  params.mode = RelaxationMode::kTransductive;
  params.loss = loss;
  params.T = T;
  params.K = hints.width();
  auto rel = [&](const std::vector<LabeledExample>& prefix) {
    RelaxationParams p = params;
    p.t = static_cast<Index>(prefix.size());
    return relaxation_value(p, cls, prefix, &hints).value;
  };

  // E_ε l(ŷ_t, y) for y = -1 and +1.
  auto expected_losses = [&](const std::vector<LabeledExample>& prefix, Index t,
                             Index x) {
    ExampleMultiset history;
    for (const auto& s : prefix) history.add(s);
    Oracle oracle(cls);
    const TieBreak tie{instance.tie, x, nullptr};
    Eigen::Array2d out = Eigen::Array2d::Zero();
    if (learner == LearnerKind::kFtl) {
      const double yhat = cls(oracle.erm(history, loss, tie).hypothesis, x);
      return Eigen::Array2d(loss_eval(loss, yhat, -1.0), loss_eval(loss, yhat, 1.0));
    }
    const auto z = future_hints(hints, t);
    const std::uint32_t patterns = std::uint32_t{1} << z.size();
    for (std::uint32_t e = 0; e < patterns; ++e) {
      ExampleMultiset doubled;
      for (std::size_t i = 0; i < z.size(); ++i) {
        doubled.add({z[i], ((e >> i) & 1U) ? 1.0 : -1.0}, 2);
      }
      const double yhat = transductive_prediction(oracle, history, doubled, x, loss, tie);
      out(0) += loss_eval(loss, yhat, -1.0);
      out(1) += loss_eval(loss, yhat, 1.0);
    }
    return Eigen::Array2d(out / static_cast<double>(patterns));
  };

  double min_slack = std::numeric_limits<double>::infinity();
  double max_cond2 = 0.0;
  std::int64_t checked = 0;
  std::string worst;
  std::vector<LabeledExample> prefix;

  std::function<void(Index)> visit = [&](Index t) {
    if (t > T) {
      max_cond2 = std::max(max_cond2,
                           std::abs(rel(prefix) + inf_total_loss(cls, prefix, loss)));
      return;
    }
    const auto row = hints.row(t);
    std::vector<Index> support(row.begin(), row.end());
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    const double before = rel(prefix);
    double lhs = -std::numeric_limits<double>::infinity();
    for (Index x : support) {
      const auto el = expected_losses(prefix, t, x);
      for (int yi = 0; yi < 2; ++yi) {
        const double y = yi == 0 ? -1.0 : 1.0;
        prefix.push_back({x, y});
        lhs = std::max(lhs, el(yi) + rel(prefix));
        prefix.pop_back();
      }
    }
    const double slack = before - lhs;
    ++checked;
    if (slack < min_slack) {
      min_slack = slack;
      std::ostringstream os;
      os << "t=" << t << " prefix=[";
      for (const auto& s : prefix) os << "(" << s.x << "," << s.y << ")";
      os << "]";
      worst = os.str();
    }
    for (Index x : support) {
      for (double y : {-1.0, 1.0}) {
        prefix.push_back({x, y});
        visit(t + 1);
        prefix.pop_back();
      }
    }
  };
  visit(1);

  VerificationReport r;
  r.name = std::string("admissibility_") + to_string(learner);
  r.mode = "exact";
  r.tolerance = kSlackTolerance;
  r.bound = 0.0;
  const bool cond1 = min_slack >= -kSlackTolerance;
  const bool cond2 = max_cond2 <= kSlackTolerance;
  r.measured = {{"min_slack", min_slack},
                {"worst_prefix", worst},
                {"condition2_max_deviation", max_cond2},
                {"prefixes_checked", checked},
                {"condition1_holds", cond1},
                {"condition2_holds", cond2}};
  r.passed = cond1 && cond2;
  if (!cond1) r.detail = "condition 1 violated at " + worst;
  return r;
}

VerificationReport monotonicity_check(const HypothesisClass& cls,
                                      std::span<const Index> z,
                                      const Eigen::Ref<const Eigen::VectorXd>& phi,
                                      Index x) {
  std::vector<Index> zx(z.begin(), z.end());
  zx.push_back(x);
  if (static_cast<Index>(zx.size()) > kMaxExactRademacher) {
    throw CapacityError("monotonicity check is limited to |Z| < 16");
  }
  const Eigen::VectorXd p = phi;
  VerificationReport r;
  r.name = "monotonicity";
  r.mode = "exact";
  // Every finite double is a dyadic rational, so scaling by a common 2^k
  // makes the whole comparison integral. int64 covers the usual grids;
  // __int128 covers arbitrary doubles short of subnormals.
  const int nz = static_cast<int>(z.size());
  double lhs = 0.0, rhs = 0.0;
  auto exact_compare = [&]<typename Int>(int k) {
    using IMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
    using IVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
    const double scale = std::ldexp(1.0, k);
    const IMat v = (cls.values() * scale).template cast<Int>();
    const IVec ph = (p * scale).template cast<Int>();
    const Int a = rademacher_sum<Int>(v, z, ph);
    const Int b = rademacher_sum<Int>(v, zx, ph);
    // 𝔑(Z) = a / 2^|Z|, 𝔑(Z∪x) = b / 2^(|Z|+1).
    r.passed = Int(2) * a <= b;
    lhs = std::ldexp(static_cast<double>(a), -nz - k);
    rhs = std::ldexp(static_cast<double>(b), -nz - 1 - k);
  };
  if (const auto k = dyadic_exponent(cls.values(), p)) {
    exact_compare.template operator()<std::int64_t>(*k);
    r.measured["arithmetic"] = "int64";
  } else if (const auto kw = dyadic_exponent(cls.values(), p, 1100, 100)) {
    exact_compare.template operator()<Int128>(*kw);
    r.measured["arithmetic"] = "int128";
  } else {
    lhs = rademacher_exact(cls, z, p);
    rhs = rademacher_exact(cls, zx, p);
    r.passed = lhs <= rhs;
    r.measured["arithmetic"] = "double";
  }
  r.measured["rademacher_z"] = lhs;
  r.measured["rademacher_zx"] = rhs;
  r.bound = rhs;
  if (!r.passed) r.detail = "regularized Rademacher complexity decreased";
  return r;
}

}  // namespace sol

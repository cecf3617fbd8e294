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

#ifndef SOL_VERIFY_HPP_
#define SOL_VERIFY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sol/adversary.hpp"
#include "sol/core.hpp"
#include "sol/learner.hpp"
#include "sol/rademacher.hpp"
#include "sol/rng.hpp"

namespace sol {

/// Outcome of one numerical check. Exact reports carry tolerance 0 (or the
/// rigorous truncation bound); Monte Carlo reports carry trials and the CI
/// half-width used for the decision.
struct VerificationReport {
  std::string name;
  std::string mode = "exact";
  nlohmann::json measured = nlohmann::json::object();
  double bound = 0.0;
  double tolerance = 0.0;
  std::int64_t trials = 0;
  double ci_halfwidth = 0.0;
  bool passed = false;
  std::string detail;
};

nlohmann::json to_json(const VerificationReport& r);

// ---- coupling (strengthened coupling lemma) ----

struct CouplingDraw {
  bool success = false;
  std::optional<std::size_t> index;  // I, uniform over {i : Y_i = 1}
};

// Y_i ~ Bern(σ P(X_i)/Q(X_i)) independently; E = any Y_i. Throws InputError
// when P/Q exceeds 1/σ somewhere or P puts mass outside supp(Q).
CouplingDraw coupling_select(std::span<const Index> samples,
                             const Eigen::Ref<const Eigen::VectorXd>& P,
                             const Eigen::Ref<const Eigen::VectorXd>& Q,
                             double sigma, Rng& rng);

struct CouplingTolerances {
  double tv = 0.02;
  double stratified_tv = 0.05;
  double band_sigmas = 4.0;
};

// Checks Pr[E^c] against (1-σ)^m, the law of X_I given E against P, and the
// same law inside buckets of (Σ_{j≠I} X_j) mod 4.
VerificationReport coupling_montecarlo(const Eigen::Ref<const Eigen::VectorXd>& P,
                                       const Eigen::Ref<const Eigen::VectorXd>& Q,
                                       double sigma, Index m, std::int64_t trials,
                                       Rng& rng, const CouplingTolerances& tol = {});

// ---- Poisson divergences ----

// A truncated sum with a rigorous bound on what truncation and rounding left out.
struct BoundedValue {
  double value = 0.0;
  double error_bar = 0.0;
};

inline constexpr double kPoissonTruncation = 1e-12;
inline constexpr Index kMaxTvDomain = 4;

/// TV between the product Poisson law P of the 2|X| label counts (mean
/// n/(2|X|) each) and the mixture E_{x*~D} Q_{x*}, where Q_{x*} adds one to
/// coordinate (x*, y(x*)). Equals ½ E_P |Σ_x D(x) n_{y(x)}(x)/λ - 1|.
/// n = 0 gives 1.
BoundedValue tv_exact_poisson(double n, Index domain_size,
                              const Eigen::Ref<const Eigen::VectorXd>& D,
                              std::span<const int> labeling);

MonteCarloValue tv_montecarlo_poisson(double n, Index domain_size,
                                      const Eigen::Ref<const Eigen::VectorXd>& D,
                                      std::span<const int> labeling,
                                      std::int64_t samples, Rng& rng);

// χ²(E_D Q_{x*} ‖ P) = (2|X|/n) Σ_x D(x)² in closed form.
double chi2_mixture(double n, Index domain_size,
                    const Eigen::Ref<const Eigen::VectorXd>& D);

// The same quantity as E_P[(Σ_x D(x) n_x/λ)²] - 1 by truncated enumeration
// of the joint Poisson coordinates (|X| <= 3).
BoundedValue chi2_direct(double n, Index domain_size,
                         const Eigen::Ref<const Eigen::VectorXd>& D);

// TV(Poi(λ), 1 + Poi(λ)); λ = 0 gives 1.
BoundedValue shifted_poisson_tv(double lambda);

// ---- budgets ----

// η = 1/sqrt(nσ) + c sqrt(d ln T/(nσ)) + nσ/(4T² ln T) + exp(-n/8).
double eta_budget(double n, double sigma, int d, Index T, double c = 1.0);

// β = 10 T K (1-σ)^K.
double beta_budget(Index T, Index K, double sigma);

// ---- relaxations ----

enum class RelaxationMode { kTransductive, kSmoothedReal, kFtpl };

struct RelaxationParams {
  RelaxationMode mode = RelaxationMode::kTransductive;
  LossSpec loss = LossSpec::absolute();
  Index T = 1;
  Index t = 0;  // number of rounds already played
  Index K = 1;
  double n = 0.0;
  double sigma = 1.0;
  double c = 1.0;
  int d = 1;
  std::optional<double> eta;  // overrides eta_budget in ftpl mode
  std::int64_t trials = 2000;  // used only when exact evaluation is too large
};

struct RelaxationValue {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
};

/// transductive: 2G 𝔑(-L^r(·, s_{1:t}), Z_{t+1:T});
/// smoothed_real: 2G E_V 𝔑(-L^r, V) + 2Gβ(T-t) with |V| = K(T-t) uniform;
/// ftpl: E_R sup_h(-Σ L̃ - Σ L) + η(T-t) with L(h,s) = -y h(x)/2.
/// `history` holds s_{1:t}; `hints` is required in transductive mode.
RelaxationValue relaxation_value(const RelaxationParams& params,
                                 const HypothesisClass& cls,
                                 std::span<const LabeledExample> history,
                                 const HintSchedule* hints, Rng* rng = nullptr);

// min_h Σ_i l(h(x_i), y_i).
double inf_total_loss(const HypothesisClass& cls,
                      std::span<const LabeledExample> history,
                      const LossSpec& loss);

struct AdmissibilityInstance {
  const HypothesisClass* cls = nullptr;
  HintSchedule hints;
  LossSpec loss = LossSpec::absolute();
  TiePolicy tie = TiePolicy::kLowestIndex;
};

/// Condition 1 of the admissibility definition for the transductive
/// relaxation, exactly: for every prefix s_{1:t-1} consistent with the hints,
/// max_{x∈Z_t} max_{y=±1} { E_ε l(ŷ, y) + Rel(s_{1:t}) } <= Rel(s_{1:t-1}).
/// Condition 2 is checked for equality at t = T. Learner: kAlg3 or kFtl.
/// Limits: |X| <= 4, T <= 3, K <= 2, |H| <= 8.
VerificationReport admissibility_check(LearnerKind learner,
                                       const AdmissibilityInstance& instance);

// 𝔑(Φ,Z) <= 𝔑(Φ,Z∪{x}) by exact enumeration with zero tolerance. Inputs
// are scaled to integers (int64, else __int128); only subnormal or huge
// entries fall back to double.
VerificationReport monotonicity_check(const HypothesisClass& cls,
                                      std::span<const Index> z,
                                      const Eigen::Ref<const Eigen::VectorXd>& phi,
                                      Index x);

// ---- generalization gap ----

struct GapBudget {
  double c0 = 3.0;  // compared against c0 sqrt(d/n)
  double c = 1.0;   // constant in the lemma's budget
  Index T = 2;
};

/// Monte Carlo estimate of E[L(h, s') - L(h, s)] where h is the ERM on
/// history ∪ Poisson hallucination ∪ {s} and s, s' ~ D_t independently, with
/// L(h, s) = -y h(x)/2. Uses the antithetic pair (s, s') ↔ (s', s) sharing
/// one hallucination, so a data-independent h gives exactly 0.
/// D_t: instance law `D`, P(y = +1 | x) = label_plus(x).
VerificationReport generalization_gap_mc(const HypothesisClass& cls,
                                         const Eigen::Ref<const Eigen::VectorXd>& D,
                                         const Eigen::Ref<const Eigen::VectorXd>& label_plus,
                                         std::span<const LabeledExample> history,
                                         double n, std::int64_t trials, Rng& rng,
                                         const GapBudget& budget = {});

}  // namespace sol

#endif  // SOL_VERIFY_HPP_

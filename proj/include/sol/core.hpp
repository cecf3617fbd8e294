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

#ifndef SOL_CORE_HPP_
#define SOL_CORE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sol/rng.hpp"

namespace sol {

// Tolerance on Σp = 1 and on the singleton smoothness bound.
inline constexpr double kSmoothTolerance = 1e-12;

class FiniteDomain {
 public:
  explicit FiniteDomain(Index size);
  Index size() const { return size_; }

 private:
  Index size_;
};

// One hypothesis as a value table over the domain.
using Hypothesis = Eigen::RowVectorXd;

/// Finite hypothesis class stored as a dense |H| x |X| matrix, one row per
/// hypothesis. Values lie in [-1, 1]; binary classes hold exactly +-1.
class HypothesisClass {
 public:
  HypothesisClass(Eigen::MatrixXd values, int declared_dim, bool binary);

  Index size() const { return values_.rows(); }
  Index domain_size() const { return values_.cols(); }
  const Eigen::MatrixXd& values() const { return values_; }
  Hypothesis hypothesis(Index h) const { return values_.row(h); }
  double operator()(Index h, Index x) const { return values_(h, x); }
  int declared_dim() const { return declared_dim_; }
  bool binary() const { return binary_; }

 private:
  Eigen::MatrixXd values_;
  int declared_dim_;
  bool binary_;
};

enum class LossKind { kBinaryIndicator, kCenteredBinary, kAbsolute, kSquared };

struct LossSpec {
  LossKind kind = LossKind::kAbsolute;
  double lipschitz_G = 0.5;

  static LossSpec binary_indicator() { return {LossKind::kBinaryIndicator, 0.5}; }
  static LossSpec centered_binary() { return {LossKind::kCenteredBinary, 0.5}; }
  static LossSpec absolute() { return {LossKind::kAbsolute, 0.5}; }
  static LossSpec squared() { return {LossKind::kSquared, 1.0}; }
  static LossSpec from_name(const std::string& name);
};

std::string to_string(LossKind kind);

// Checked scalar loss: binary_indicator needs +-1 on both sides,
// centered_binary needs a +-1 label, every kind needs values in [-1, 1].
double loss_eval(const LossSpec& loss, double prediction, double label);

// Unchecked loss of every prediction in `predictions` against one label.
Eigen::ArrayXd loss_column(const LossSpec& loss,
                           const Eigen::Ref<const Eigen::VectorXd>& predictions,
                           double label);

// Throws InputError when (prediction, label) is outside the loss domain.
void check_loss_domain(const LossSpec& loss, double prediction, double label);
void check_label(const LossSpec& loss, double label);

bool is_sign(double v);

/// True iff every atom satisfies probs[x] <= 1/(σ|X|) + 1e-12. On a finite
/// domain the subset condition of σ-smoothness reduces to atoms.
bool validate_smooth(const Eigen::Ref<const Eigen::VectorXd>& probs,
                     double sigma);

// Throws InputError unless probs is a probability vector within 1e-12.
void check_probability_vector(const Eigen::Ref<const Eigen::VectorXd>& probs);

class SmoothDistribution {
 public:
  SmoothDistribution(Eigen::VectorXd probs, double sigma);
  static SmoothDistribution uniform(Index domain_size);

  const Eigen::VectorXd& probs() const { return probs_; }
  double sigma() const { return sigma_; }
  Index domain_size() const { return probs_.size(); }
  // Largest σ for which these probabilities are σ-smooth.
  double tightest_sigma() const;

 private:
  Eigen::VectorXd probs_;
  double sigma_;
};

// Extreme points of {D : D(x) <= 1/(σ|X|), Σ D = 1}: floor(σ|X|) atoms at the
// cap plus at most one fractional atom.
std::vector<Eigen::VectorXd> smooth_vertices(Index domain_size, double sigma,
                                             std::size_t max_vertices = 100000);

struct LabeledExample {
  Index x = 0;
  double y = 0.0;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// Multiset of labeled examples as (example, count) pairs in first-arrival
/// order. Adding an existing example bumps its count.
class ExampleMultiset {
 public:
  struct Entry {
    LabeledExample example;
    std::int64_t count = 0;
  };

  void add(const LabeledExample& example, std::int64_t count = 1);
  void add_all(const ExampleMultiset& other, std::int64_t multiplicity = 1);
  void reserve(std::size_t n);

  std::span<const Entry> entries() const { return entries_; }
  std::int64_t logical_size() const { return logical_size_; }
  bool empty() const { return logical_size_ == 0; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<Index, std::uint64_t>& k) const {
      return std::hash<std::uint64_t>()(static_cast<std::uint64_t>(k.first) *
                                            0x9E3779B97F4A7C15ULL ^
                                        k.second);
    }
  };
  std::vector<Entry> entries_;
  std::unordered_map<std::pair<Index, std::uint64_t>, std::size_t, KeyHash>
      index_;
  std::int64_t logical_size_ = 0;
};

// 2^d hypotheses, each constant +-1 on d equal contiguous blocks of the first
// `support_size` indices and +1 on the rest of the domain. support_size = 0
// means the whole domain.
HypothesisClass make_partition_class(const FiniteDomain& domain, int d,
                                     Index support_size = 0);

// 2^d hypotheses: every +-1 pattern on `special`, +1 elsewhere.
HypothesisClass make_shatter_class(const FiniteDomain& domain,
                                   std::span<const Index> special);

// Brute-force VC dimension of a binary class (|X| <= 16, |H| <= 1024).
int compute_vc_dimension(const HypothesisClass& cls);

nlohmann::json class_to_json(const HypothesisClass& cls);
HypothesisClass class_from_json(const nlohmann::json& doc);

}  // namespace sol

#endif  // SOL_CORE_HPP_

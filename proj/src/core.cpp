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

#include "sol/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_set>

#include "sol/errors.hpp"

namespace sol {

FiniteDomain::FiniteDomain(Index size) : size_(size) {
  if (size < 1) throw InputError("domain size must be at least 1");
}

HypothesisClass::HypothesisClass(Eigen::MatrixXd values, int declared_dim,
                                 bool binary)
    : values_(std::move(values)), declared_dim_(declared_dim), binary_(binary) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw InputError("hypothesis class must be nonempty over a nonempty domain");
  }
  if (declared_dim_ < 0) throw InputError("declared_dim must be nonnegative");
  if ((values_.array().abs() > 1.0).any() || !values_.allFinite()) {
    throw InputError("hypothesis values must lie in [-1, 1]");
  }
  if (binary_ && !(values_.array().abs() == 1.0).all()) {
    throw InputError("binary hypothesis class must take values in {-1, +1}");
  }
}

LossSpec LossSpec::from_name(const std::string& name) {
  if (name == "binary_indicator") return binary_indicator();
  if (name == "centered_binary") return centered_binary();
  if (name == "absolute") return absolute();
  if (name == "squared") return squared();
  throw InputError("unknown loss kind: " + name);
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kBinaryIndicator: return "binary_indicator";
    case LossKind::kCenteredBinary: return "centered_binary";
    case LossKind::kAbsolute: return "absolute";
    case LossKind::kSquared: return "squared";
  }
  return "unknown";
}

bool is_sign(double v) { return v == 1.0 || v == -1.0; }

void check_label(const LossSpec& loss, double label) {
  if (!(label >= -1.0 && label <= 1.0)) {
    throw InputError("label outside [-1, 1]");
  }
  if ((loss.kind == LossKind::kBinaryIndicator ||
       loss.kind == LossKind::kCenteredBinary) &&
      !is_sign(label)) {
    throw InputError("binary loss requires a label in {-1, +1}");
  }
}

void check_loss_domain(const LossSpec& loss, double prediction, double label) {
  check_label(loss, label);
  if (!(prediction >= -1.0 && prediction <= 1.0)) {
    throw InputError("prediction outside [-1, 1]");
  }
  if (loss.kind == LossKind::kBinaryIndicator && !is_sign(prediction)) {
    throw InputError("binary_indicator requires a prediction in {-1, +1}");
  }
}

double loss_eval(const LossSpec& loss, double prediction, double label) {
  check_loss_domain(loss, prediction, label);
  switch (loss.kind) {
    case LossKind::kBinaryIndicator: return prediction != label ? 1.0 : 0.0;
    case LossKind::kCenteredBinary: return -label * prediction / 2.0;
    case LossKind::kAbsolute: return std::abs(prediction - label) / 2.0;
    case LossKind::kSquared: {
      const double diff = prediction - label;
      return diff * diff / 4.0;
    }
  }
  return 0.0;
}

Eigen::ArrayXd loss_column(const LossSpec& loss,
                           const Eigen::Ref<const Eigen::VectorXd>& predictions,
                           double label) {
  const auto p = predictions.array();
  switch (loss.kind) {
    case LossKind::kBinaryIndicator:
      return (p != label).cast<double>();
    case LossKind::kCenteredBinary:
      return -label * p / 2.0;
    case LossKind::kAbsolute:
      return (p - label).abs() / 2.0;
    case LossKind::kSquared:
      return (p - label).square() / 4.0;
  }
  return Eigen::ArrayXd::Zero(predictions.size());
}

void check_probability_vector(const Eigen::Ref<const Eigen::VectorXd>& probs) {
  if (probs.size() == 0) throw InputError("empty probability vector");
  if (!probs.allFinite() || (probs.array() < 0.0).any()) {
    throw InputError("probability vector has negative or non-finite entries");
  }
  if (std::abs(probs.sum() - 1.0) > kSmoothTolerance) {
    throw InputError("probability vector does not sum to 1");
  }
}

bool validate_smooth(const Eigen::Ref<const Eigen::VectorXd>& probs,
                     double sigma) {
  check_probability_vector(probs);
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw InputError("sigma must lie in (0, 1]");
  }
  const double cap = 1.0 / (sigma * static_cast<double>(probs.size()));
  return probs.maxCoeff() <= cap + kSmoothTolerance;
}

SmoothDistribution::SmoothDistribution(Eigen::VectorXd probs, double sigma)
    : probs_(std::move(probs)), sigma_(sigma) {
  if (!validate_smooth(probs_, sigma_)) {
    throw InputError("distribution is not sigma-smooth");
  }
}

SmoothDistribution SmoothDistribution::uniform(Index domain_size) {
  FiniteDomain domain(domain_size);
  return SmoothDistribution(
      Eigen::VectorXd::Constant(domain.size(), 1.0 / domain.size()), 1.0);
}

double SmoothDistribution::tightest_sigma() const {
  return std::min(1.0, 1.0 / (probs_.maxCoeff() * probs_.size()));
}

namespace {

// Visits all k-subsets of {0..n-1} as index vectors in lexicographic order.
template <typename Fn>
void for_each_subset(Index n, Index k, Fn&& fn) {
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(idx);
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

double binomial(Index n, Index k) {
  double r = 1.0;
  for (Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return r;
}

}  // namespace

std::vector<Eigen::VectorXd> smooth_vertices(Index domain_size, double sigma,
                                             std::size_t max_vertices) {
  FiniteDomain domain(domain_size);
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw InputError("sigma must lie in (0, 1]");
  }
  const double cap = 1.0 / (sigma * static_cast<double>(domain_size));
  // Number of atoms saturated at the cap; the snap absorbs σ|X| = 3.0000001.
  auto full = static_cast<Index>(std::floor(1.0 / cap + 1e-9));
  full = std::min(full, domain_size);
  double rest = 1.0 - static_cast<double>(full) * cap;
  if (rest < 1e-12) rest = 0.0;
  const bool fractional = rest > 0.0 && full < domain_size;

  const double count = binomial(domain_size, full) *
                       (fractional ? static_cast<double>(domain_size - full) : 1.0);
  if (count > static_cast<double>(max_vertices)) {
    throw CapacityError("smooth polytope has too many vertices to enumerate");
  }

  std::vector<Eigen::VectorXd> out;
  for_each_subset(domain_size, full, [&](const std::vector<Index>& subset) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(domain_size);
    for (Index i : subset) v(i) = cap;
    if (!fractional) {
      v /= v.sum();
      out.push_back(v);
      return;
    }
    for (Index j = 0; j < domain_size; ++j) {
      if (v(j) != 0.0) continue;
      Eigen::VectorXd w = v;
      w(j) = rest;
      out.push_back(w);
    }
  });
  return out;
}

void ExampleMultiset::add(const LabeledExample& example, std::int64_t count) {
  if (count < 1) throw InputError("multiset counts must be at least 1");
  std::uint64_t bits = 0;
  const double y = example.y == 0.0 ? 0.0 : example.y;  // fold -0.0
  std::memcpy(&bits, &y, sizeof bits);
  const auto key = std::make_pair(example.x, bits);
  auto [it, inserted] = index_.try_emplace(key, entries_.size());
  if (inserted) {
    entries_.push_back({example, count});
  } else {
    entries_[it->second].count += count;
  }
  logical_size_ += count;
}

void ExampleMultiset::add_all(const ExampleMultiset& other,
                              std::int64_t multiplicity) {
  for (const Entry& e : other.entries_) add(e.example, e.count * multiplicity);
}

void ExampleMultiset::reserve(std::size_t n) {
  entries_.reserve(n);
  index_.reserve(n);
}

HypothesisClass make_partition_class(const FiniteDomain& domain, int d,
                                     Index support_size) {
  if (d < 1) throw InputError("partition class needs d >= 1");
  if (support_size == 0) support_size = domain.size();
  if (support_size < 0 || support_size > domain.size()) {
    throw InputError("partition support exceeds the domain");
  }
  if (support_size % d != 0) {
    throw InputError("partition support size must be divisible by d");
  }
  if (d > 20) throw CapacityError("partition class with d > 20 is too large");
  const Index block = support_size / d;
  const Index count = Index{1} << d;
  Eigen::MatrixXd values = Eigen::MatrixXd::Ones(count, domain.size());
  for (Index h = 0; h < count; ++h) {
    for (int j = 0; j < d; ++j) {
      const double sign = ((h >> j) & 1) != 0 ? -1.0 : 1.0;
      values.row(h).segment(j * block, block).setConstant(sign);
    }
  }
  return HypothesisClass(std::move(values), d, true);
}

HypothesisClass make_shatter_class(const FiniteDomain& domain,
                                   std::span<const Index> special) {
  std::unordered_set<Index> seen;
  for (Index x : special) {
    if (x < 0 || x >= domain.size()) {
      throw InputError("special index outside the domain");
    }
    if (!seen.insert(x).second) throw InputError("duplicate special index");
  }
  const auto d = static_cast<int>(special.size());
  if (d > 20) throw CapacityError("shatter class with d > 20 is too large");
  const Index count = Index{1} << d;
  Eigen::MatrixXd values = Eigen::MatrixXd::Ones(count, domain.size());
  for (Index h = 0; h < count; ++h) {
    for (int j = 0; j < d; ++j) {
      if (((h >> j) & 1) != 0) values(h, special[static_cast<std::size_t>(j)]) = -1.0;
    }
  }
  return HypothesisClass(std::move(values), d, true);
}

int compute_vc_dimension(const HypothesisClass& cls) {
  if (!cls.binary()) {
    throw InputError("compute_vc_dimension requires a binary class");
  }
  if (cls.domain_size() > 16 || cls.size() > 1024) {
    throw CapacityError("VC search limited to |X| <= 16 and |H| <= 1024");
  }
  const Index n = cls.domain_size();
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(cls.size()), 0);
  for (Index h = 0; h < cls.size(); ++h) {
    for (Index x = 0; x < n; ++x) {
      if (cls(h, x) > 0) masks[static_cast<std::size_t>(h)] |= 1u << x;
    }
  }
  int best = 0;
  std::vector<char> seen;
  // Shattering is hereditary, so stop at the first size with no witness.
  for (Index m = 1; m <= n; ++m) {
    if ((Index{1} << m) > cls.size()) break;
    bool found = false;
    for_each_subset(n, m, [&](const std::vector<Index>& subset) {
      if (found) return;
      seen.assign(std::size_t{1} << m, 0);
      std::size_t distinct = 0;
      for (std::uint32_t mask : masks) {
        // Compress the projection onto `subset` into an m-bit code.
        std::uint32_t code = 0;
        for (Index b = 0; b < m; ++b) {
          if ((mask >> subset[static_cast<std::size_t>(b)]) & 1u) code |= 1u << b;
        }
        if (!seen[code]) {
          seen[code] = 1;
          ++distinct;
        }
      }
      if (distinct == (std::size_t{1} << m)) found = true;
    });
    if (!found) break;
    best = static_cast<int>(m);
  }
  return best;
}

nlohmann::json class_to_json(const HypothesisClass& cls) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index h = 0; h < cls.size(); ++h) {
    nlohmann::json row = nlohmann::json::array();
    for (Index x = 0; x < cls.domain_size(); ++x) row.push_back(cls(h, x));
    rows.push_back(std::move(row));
  }
  return {{"domain_size", cls.domain_size()},
          {"hypotheses", std::move(rows)},
          {"declared_dim", cls.declared_dim()},
          {"binary", cls.binary()}};
}

HypothesisClass class_from_json(const nlohmann::json& doc) {
  try {
    const auto size = doc.at("domain_size").get<Index>();
    FiniteDomain domain(size);
    const auto& rows = doc.at("hypotheses");
    if (!rows.is_array() || rows.empty()) {
      throw InputError("hypotheses must be a nonempty array");
    }
    Eigen::MatrixXd values(static_cast<Index>(rows.size()), domain.size());
    for (std::size_t h = 0; h < rows.size(); ++h) {
      if (rows[h].size() != static_cast<std::size_t>(domain.size())) {
        throw InputError("hypothesis row length differs from domain_size");
      }
      for (Index x = 0; x < domain.size(); ++x) {
        values(static_cast<Index>(h), x) =
            rows[h][static_cast<std::size_t>(x)].get<double>();
      }
    }
    return HypothesisClass(std::move(values), doc.at("declared_dim").get<int>(),
                           doc.at("binary").get<bool>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed hypothesis class JSON: ") + e.what());
  }
}

}  // namespace sol

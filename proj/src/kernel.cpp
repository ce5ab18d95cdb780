/*
 * Copyright 2026 The GeoShap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "geoshap/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "combinatorics.hpp"
#include "geoshap/error.hpp"

namespace geoshap {

double ShapleyKernelWeight(std::size_t s, std::size_t m) {
  if (s == 0 || s >= m) {
    Fail(ErrorKind::kInvalidArgument,
         "Shapley kernel weight is undefined for coalition size " +
             std::to_string(s) + " of " + std::to_string(m) +
             "; endpoints enter as constraints");
  }
  return static_cast<double>(m - 1) /
         (internal::Binomial(m, s) * static_cast<double>(s) *
          static_cast<double>(m - s));
}

std::size_t MinimumBudget(std::size_t m) { return 2 * m + 2; }

std::size_t DefaultBudget(std::size_t m) {
  const std::size_t cap = 2048 + 2 * m;
  if (m >= 63) return cap;
  return std::min<std::size_t>(std::size_t{1} << m, cap);
}

namespace {

// Appends every size-s subset of m players (Gosper's hack).
void AddAllOfSize(std::size_t m, std::size_t s, std::set<std::uint64_t>& out) {
  std::uint64_t mask = (std::uint64_t{1} << s) - 1;
  const std::uint64_t limit = std::uint64_t{1} << m;
  while (mask < limit) {
    out.insert(mask);
    const std::uint64_t c = mask & -mask;
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

std::uint64_t RandomSubset(std::size_t m, std::size_t s, std::mt19937_64& rng,
                           std::vector<std::size_t>& scratch) {
  std::iota(scratch.begin(), scratch.end(), 0);
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < s; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, m - 1);
    std::swap(scratch[i], scratch[pick(rng)]);
    mask |= std::uint64_t{1} << scratch[i];
  }
  return mask;
}

}  // namespace

std::vector<Coalition> BuildDesign(std::size_t m, std::size_t budget,
                                   std::uint64_t seed) {
  if (m == 0 || m > kMaxPlayers) {
    Fail(ErrorKind::kInvalidArgument, "player count out of range");
  }
  std::vector<Coalition> out;
  if (m < 63 && (std::size_t{1} << m) <= budget) {
    out.reserve(std::size_t{1} << m);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      out.emplace_back(mask);
    }
    return out;
  }
  if (budget < MinimumBudget(m)) {
    Fail(ErrorKind::kBudget,
         "coalition budget " + std::to_string(budget) + " is below the minimum " +
             std::to_string(MinimumBudget(m)) + " for " + std::to_string(m) +
             " players");
  }
  const std::uint64_t full = Coalition::Full(m).bits();
  std::set<std::uint64_t> chosen = {0, full};
  std::size_t remaining = budget - 2;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> scratch(m);
  for (std::size_t s = 1; 2 * s <= m && remaining >= 2; ++s) {
    const double stratum =
        internal::Binomial(m, s) * (2 * s == m ? 1.0 : 2.0);
    if (stratum <= static_cast<double>(remaining)) {
      AddAllOfSize(m, s, chosen);
      if (2 * s != m) AddAllOfSize(m, m - s, chosen);
      remaining -= static_cast<std::size_t>(stratum);
      continue;
    }
    // Partially sampled stratum: stratum > remaining guarantees unused pairs.
    while (remaining >= 2) {
      const std::uint64_t mask = RandomSubset(m, s, rng, scratch);
      if (chosen.contains(mask)) continue;
      chosen.insert(mask);
      chosen.insert(~mask & full);
      remaining -= 2;
    }
    break;
  }
  out.reserve(chosen.size());
  for (std::uint64_t mask : chosen) out.emplace_back(mask);
  return out;
}

DesignMatrix::DesignMatrix(std::size_t m, std::vector<Coalition> coalitions)
    : m_(m), coalitions_(std::move(coalitions)) {
  if (m == 0 || m > kMaxPlayers) {
    Fail(ErrorKind::kInvalidArgument, "player count out of range");
  }
  const Coalition full = Coalition::Full(m);
  std::set<std::uint64_t> seen;
  bool has_empty = false;
  bool has_full = false;
  std::vector<double> count(m + 1, 0.0);
  for (std::size_t i = 0; i < coalitions_.size(); ++i) {
    const Coalition c = coalitions_[i];
    if ((c.bits() & ~full.bits()) != 0) {
      Fail(ErrorKind::kInvalidArgument, "coalition " + std::to_string(c.bits()) +
                                            " references players beyond " +
                                            std::to_string(m));
    }
    if (!seen.insert(c.bits()).second) {
      Fail(ErrorKind::kInvalidArgument,
           "design row " + ToString(c, m) + " appears more than once");
    }
    if (c == Coalition::Empty()) {
      has_empty = true;
      empty_row_ = i;
    } else if (c == full) {
      has_full = true;
      full_row_ = i;
    } else {
      interior_.push_back(i);
      count[c.size()] += 1.0;
    }
  }
  if (!has_empty || !has_full) {
    Fail(ErrorKind::kInvalidArgument,
         "design must contain the empty and the full coalition");
  }
  weights_.resize(static_cast<Eigen::Index>(interior_.size()));
  for (std::size_t r = 0; r < interior_.size(); ++r) {
    const std::size_t s = coalitions_[interior_[r]].size();
    weights_(static_cast<Eigen::Index>(r)) =
        ShapleyKernelWeight(s, m) * internal::Binomial(m, s) / count[s];
  }
}

bool DesignMatrix::full_enumeration() const {
  return m_ < 63 && coalitions_.size() == (std::size_t{1} << m_);
}

ConstrainedWlsSolver::ConstrainedWlsSolver(DesignMatrix design, SolverPath path)
    : design_(std::move(design)), path_(path) {
  const std::size_t m = design_.n_players();
  const std::size_t free = m - 1;
  if (free == 0) return;
  const auto& interior = design_.interior_rows();
  const auto q = static_cast<Eigen::Index>(interior.size());
  const auto f = static_cast<Eigen::Index>(free);
  const std::size_t last = m - 1;
  reduced_.resize(q, f);
  for (Eigen::Index r = 0; r < q; ++r) {
    const Coalition c = design_.coalitions()[interior[static_cast<std::size_t>(r)]];
    const double z_last = c.contains(last) ? 1.0 : 0.0;
    for (Eigen::Index i = 0; i < f; ++i) {
      reduced_(r, i) = (c.contains(static_cast<std::size_t>(i)) ? 1.0 : 0.0) - z_last;
    }
  }
  const std::string advice =
      "; increase the coalition budget";
  if (q < f) {
    Fail(ErrorKind::kBudget, "design has " + std::to_string(q) +
                                 " weighted rows for " + std::to_string(f) +
                                 " unknowns" + advice);
  }
  const Vector sqrt_w = design_.weights().array().sqrt();
  if (path_ == SolverPath::kQr) {
    Eigen::MatrixXd weighted = sqrt_w.asDiagonal() * reduced_;
    qr_.compute(weighted);
    if (qr_.rank() < f) {
      Fail(ErrorKind::kBudget, "design is rank deficient (rank " +
                                   std::to_string(qr_.rank()) + " < " +
                                   std::to_string(f) + ")" + advice);
    }
  } else {
    Eigen::MatrixXd normal =
        reduced_.transpose() * design_.weights().asDiagonal() * reduced_;
    ldlt_.compute(normal);
    const Vector d = ldlt_.vectorD().cwiseAbs();
    if (ldlt_.info() != Eigen::Success || d.minCoeff() <= 1e-12 * d.maxCoeff()) {
      Fail(ErrorKind::kBudget, "normal equations are singular" + advice);
    }
  }
}

std::vector<double> ConstrainedWlsSolver::Solve(
    std::span<const double> values) const {
  const auto& coalitions = design_.coalitions();
  if (values.size() != coalitions.size()) {
    Fail(ErrorKind::kInvalidArgument, "expected " +
                                          std::to_string(coalitions.size()) +
                                          " coalition values, got " +
                                          std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) Fail(ErrorKind::kNumerical, "non-finite coalition value");
  }
  const std::size_t m = design_.n_players();
  const double v_empty = values[design_.empty_row()];
  const double total = values[design_.full_row()] - v_empty;
  std::vector<double> phi(m, 0.0);
  if (m == 1) {
    phi[0] = total;
    return phi;
  }
  const auto& interior = design_.interior_rows();
  const std::size_t last = m - 1;
  Vector rhs(static_cast<Eigen::Index>(interior.size()));
  for (std::size_t r = 0; r < interior.size(); ++r) {
    const Coalition c = coalitions[interior[r]];
    rhs(static_cast<Eigen::Index>(r)) =
        values[interior[r]] - v_empty - (c.contains(last) ? total : 0.0);
  }
  Vector solution;
  if (path_ == SolverPath::kQr) {
    const Vector weighted = design_.weights().array().sqrt() * rhs.array();
    solution = qr_.solve(weighted);
  } else {
    solution = ldlt_.solve(reduced_.transpose() *
                           (design_.weights().array() * rhs.array()).matrix());
  }
  double assigned = 0.0;
  for (std::size_t i = 0; i < last; ++i) {
    phi[i] = solution(static_cast<Eigen::Index>(i));
    assigned += phi[i];
  }
  phi[last] = total - assigned;
  return phi;
}

namespace {

std::size_t ResolveBudget(std::size_t n_features, bool include_geo,
                          std::size_t budget) {
  const std::size_t m = n_features + (include_geo ? 1 : 0);
  return budget == 0 ? DefaultBudget(m) : budget;
}

// Feature coalitions; with GEO each is evaluated twice so the feature design
// gets half the budget.
std::vector<Coalition> FeatureDesign(std::size_t n_features, bool include_geo,
                                     std::size_t budget, std::uint64_t seed) {
  const std::size_t resolved = ResolveBudget(n_features, include_geo, budget);
  if (!include_geo) return BuildDesign(n_features, resolved, seed);
  if (n_features < 63 && (std::size_t{2} << n_features) <= resolved) {
    return BuildDesign(n_features, resolved / 2, seed);
  }
  if (resolved < 2 * MinimumBudget(n_features)) {
    Fail(ErrorKind::kBudget,
         "coalition budget " + std::to_string(resolved) +
             " is below the minimum " +
             std::to_string(2 * MinimumBudget(n_features)) + " for " +
             std::to_string(n_features) + " features plus GEO");
  }
  return BuildDesign(n_features, resolved / 2, seed);
}

std::vector<Coalition> PlayerCoalitions(const std::vector<Coalition>& features,
                                        bool include_geo, std::size_t geo) {
  if (!include_geo) return features;
  std::vector<Coalition> out;
  out.reserve(2 * features.size());
  for (Coalition c : features) {
    out.push_back(c);
    out.push_back(c.with(geo));
  }
  return out;
}

}  // namespace

GeoKernelEstimator::GeoKernelEstimator(std::size_t n_features, bool include_geo,
                                       std::size_t budget, std::uint64_t seed,
                                       SolverPath path)
    : players_(n_features, include_geo),
      coalitions_(PlayerCoalitions(
          FeatureDesign(n_features, include_geo, budget, seed), include_geo,
          n_features)),
      main_(DesignMatrix(players_.size(), coalitions_), path) {
  if (!include_geo) return;
  std::vector<Coalition> features;
  features.reserve(coalitions_.size() / 2);
  for (std::size_t i = 0; i < coalitions_.size(); i += 2) {
    features.push_back(coalitions_[i]);
    without_geo_.push_back(i);
    with_geo_.push_back(i + 1);
  }
  interaction_.emplace(DesignMatrix(n_features, std::move(features)), path);
}

bool GeoKernelEstimator::full_enumeration() const {
  return main_.design().full_enumeration();
}

GeoComponents GeoKernelEstimator::Solve(std::span<const double> values) const {
  const std::vector<double> shapley = main_.Solve(values);
  const std::size_t p = players_.n_features();
  GeoComponents out;
  out.phi0 = values[main_.design().empty_row()];
  out.prediction = values[main_.design().full_row()];
  out.phi.assign(shapley.begin(), shapley.begin() + static_cast<std::ptrdiff_t>(p));
  out.phi_geo_x.assign(p, 0.0);
  if (!interaction_) return out;

  std::vector<double> derived(without_geo_.size());
  for (std::size_t i = 0; i < derived.size(); ++i) {
    derived[i] = values[with_geo_[i]] - values[without_geo_[i]];
  }
  const std::vector<double> interaction = interaction_->Solve(derived);
  out.phi_geo = shapley[players_.geo_player()];
  for (std::size_t j = 0; j < p; ++j) {
    out.phi_geo_x[j] = interaction[j];
    out.phi[j] -= 0.5 * interaction[j];
    out.phi_geo -= 0.5 * interaction[j];
  }
  return out;
}

}  // namespace geoshap

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

// Kernel (weighted least squares) estimation of Shapley and GeoShapley
// attributions from a sampled set of coalitions.
//
// Two constrained regressions share one set of model evaluations:
//
//  1. The m-player game v over features plus GEO. Regressing v(S) - v(empty)
//     on coalition membership with Shapley kernel weights, subject to the
//     coefficients summing to v(full) - v(empty), yields Shapley values.
//  2. The p-player derived game d(S) = v(S + GEO) - v(S) over the features.
//     Its Shapley values are the GEO x feature interaction indices.
//
// The coalition list is built over the features and every coalition is
// evaluated with and without GEO, so both regressions see consistent data.
// With the full coalition space both regressions are exact and the estimator
// reproduces GeoShapleyFromGame.

#ifndef GEOSHAP_KERNEL_HPP_
#define GEOSHAP_KERNEL_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "geoshap/dataset.hpp"
#include "geoshap/explanation.hpp"
#include "geoshap/oracle.hpp"
#include "geoshap/players.hpp"

namespace geoshap {

enum class SolverPath {
  kQr,               // column-pivoted Householder QR of the weighted design
  kNormalEquations,  // LDLT of the weighted normal equations
};

// (m - 1) / (C(m, s) * s * (m - s)) for 0 < s < m. The endpoints are hard
// constraints rather than weighted rows and are rejected.
double ShapleyKernelWeight(std::size_t s, std::size_t m);

// Smallest budget accepted by BuildDesign when 2^m exceeds it: the two
// endpoints plus every singleton and co-singleton.
std::size_t MinimumBudget(std::size_t m);

// min(2^m, 2048 + 2m).
std::size_t DefaultBudget(std::size_t m);

// Coalitions over m players, sorted by bitmask, always containing the empty
// and full coalitions. If 2^m <= budget every coalition is returned.
// Otherwise sizes are filled from the extremes inward (1 and m-1, then 2 and
// m-2, ...); the first size pair that does not fit is sampled uniformly at
// random in complement pairs until the budget is spent.
std::vector<Coalition> BuildDesign(std::size_t m, std::size_t budget,
                                   std::uint64_t seed);

// Coalition design for one constrained regression. Interior rows carry
// Shapley kernel weights rescaled per coalition size by
// C(m, s) / (rows of size s), which leaves fully enumerated sizes at their
// textbook weight and lets a partially sampled size stand for its whole
// stratum.
class DesignMatrix {
 public:
  DesignMatrix(std::size_t m, std::vector<Coalition> coalitions);

  std::size_t n_players() const { return m_; }
  const std::vector<Coalition>& coalitions() const { return coalitions_; }
  std::size_t empty_row() const { return empty_row_; }
  std::size_t full_row() const { return full_row_; }
  // Indices into coalitions() of the weighted rows.
  const std::vector<std::size_t>& interior_rows() const { return interior_; }
  const Vector& weights() const { return weights_; }
  bool full_enumeration() const;

 private:
  std::size_t m_;
  std::vector<Coalition> coalitions_;
  std::size_t empty_row_ = 0;
  std::size_t full_row_ = 0;
  std::vector<std::size_t> interior_;
  Vector weights_;
};

// Weighted least squares with intercept fixed to v(empty) and coefficients
// summing to v(full) - v(empty). The last player's coefficient is eliminated
// algebraically, so the endpoints never enter as (infinitely) weighted rows.
// The factorization depends only on the design and is reused across
// instances.
class ConstrainedWlsSolver {
 public:
  ConstrainedWlsSolver(DesignMatrix design, SolverPath path = SolverPath::kQr);

  const DesignMatrix& design() const { return design_; }

  // values[i] = v(design().coalitions()[i]). Returns one coefficient per
  // player.
  std::vector<double> Solve(std::span<const double> values) const;

 private:
  DesignMatrix design_;
  SolverPath path_;
  Matrix reduced_;  // interior rows x (m - 1)
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

// Maps one instance's coalition values to GeoShapley (or, without GEO,
// Shapley) components. Shared read-only across all rows of a data set.
class GeoKernelEstimator {
 public:
  // budget == 0 selects DefaultBudget(m).
  GeoKernelEstimator(std::size_t n_features, bool include_geo,
                     std::size_t budget, std::uint64_t seed,
                     SolverPath path = SolverPath::kQr);

  const PlayerIndex& players() const { return players_; }
  // Coalitions (over players()) whose values Solve() expects, in order.
  const std::vector<Coalition>& coalitions() const { return coalitions_; }
  bool full_enumeration() const;

  GeoComponents Solve(std::span<const double> values) const;

 private:
  PlayerIndex players_;
  std::vector<Coalition> coalitions_;
  ConstrainedWlsSolver main_;
  // Only with GEO: regression over the derived game, and for every feature
  // coalition the index of its value without and with GEO.
  std::optional<ConstrainedWlsSolver> interaction_;
  std::vector<std::size_t> without_geo_;
  std::vector<std::size_t> with_geo_;
};

struct ExplainConfig {
  std::size_t budget = 0;  // 0: default for the player count
  std::uint64_t seed = 0;
  bool include_geo = true;
  SolverPath solver = SolverPath::kQr;
  std::size_t threads = 1;
};

// Explains every row of data. Deterministic for fixed (data, oracle,
// background, config); independent of the thread count. Row failures are
// collected and reported together with their row ids.
ExplanationSet Explain(const DataSet& data, const PredictionOracle& oracle,
                       const BackgroundSet& background,
                       const ExplainConfig& config);

}  // namespace geoshap

#endif  // GEOSHAP_KERNEL_HPP_

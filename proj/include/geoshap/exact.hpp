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

// Brute-force reference attributions. Everything here enumerates all 2^m
// coalitions and serves as ground truth for the sampled estimator in
// kernel.hpp.

#ifndef GEOSHAP_EXACT_HPP_
#define GEOSHAP_EXACT_HPP_

#include <span>
#include <vector>

#include "geoshap/dataset.hpp"
#include "geoshap/explanation.hpp"
#include "geoshap/oracle.hpp"
#include "geoshap/players.hpp"

namespace geoshap {

struct ExactAttribution {
  std::vector<double> phi;  // one per player
  double phi0 = 0.0;        // v(empty)
  double prediction = 0.0;  // v(full)
};

bool VerifyEfficiency(const ExactAttribution& attribution, double prediction,
                      double tol);

// Shapley values of a tabulated game: game[mask] = v(mask), size 2^m.
//   phi_j = sum_{S not containing j} s!(m-s-1)!/m! * (v(S + j) - v(S))
// computed in one pass over all coalitions.
ExactAttribution ShapleyFromGame(std::span<const double> game, std::size_t m);

// Shapley interaction index between players a and b:
//   sum_{S excluding a,b} s!(m-s-2)!/(m-1)! *
//       (v(S+a+b) - v(S+a) - v(S+b) + v(S))
double InteractionIndexFromGame(std::span<const double> game, std::size_t m,
                                std::size_t a, std::size_t b);

// GeoShapley components of a tabulated game whose last player is GEO:
//   phi_geo_x[j] = I(GEO, j)
//   phi[j]       = Shapley_j   - I(GEO, j) / 2
//   phi_geo      = Shapley_GEO - sum_j I(GEO, j) / 2
// Each pairwise GEO interaction is split evenly out of the two players'
// Shapley values, so the components still sum to v(full) - v(empty).
GeoComponents GeoShapleyFromGame(std::span<const double> game, std::size_t m);

struct ExactOptions {
  std::size_t max_players = 20;
};

ExactAttribution ShapleyExact(const PredictionOracle& oracle,
                              const Vector& instance,
                              const BackgroundSet& background,
                              const PlayerIndex& players,
                              ExactOptions options = {});

// Requires a GEO player; default cap is 16 players.
GeoComponents GeoShapleyEnumerated(const PredictionOracle& oracle,
                                   const Vector& instance,
                                   const BackgroundSet& background,
                                   const PlayerIndex& players,
                                   ExactOptions options = {16});

}  // namespace geoshap

#endif  // GEOSHAP_EXACT_HPP_

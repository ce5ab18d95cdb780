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

#include "geoshap/exact.hpp"

#include <cmath>

#include "combinatorics.hpp"
#include "geoshap/error.hpp"
#include "geoshap/value_function.hpp"

namespace geoshap {

double GeoComponents::sum() const {
  double total = phi0 + phi_geo;
  for (double value : phi) total += value;
  for (double value : phi_geo_x) total += value;
  return total;
}

bool VerifyEfficiency(const GeoComponents& components, double tol) {
  return std::abs(components.sum() - components.prediction) <= tol;
}

double ExplanationSet::base_value() const {
  return rows.empty() ? 0.0 : rows.front().components.phi0;
}

bool VerifyEfficiency(const ExactAttribution& attribution, double prediction,
                      double tol) {
  double total = attribution.phi0;
  for (double value : attribution.phi) total += value;
  return std::abs(total - prediction) <= tol;
}

namespace {

void CheckGame(std::span<const double> game, std::size_t m) {
  if (m == 0 || m > 30 || game.size() != (std::size_t{1} << m)) {
    Fail(ErrorKind::kInvalidArgument,
         "game table must hold 2^m values for 1 <= m <= 30");
  }
}

void CheckPlayerLimit(const PlayerIndex& players, std::size_t limit) {
  if (players.size() > limit) {
    Fail(ErrorKind::kBudget,
         "exact enumeration of " + std::to_string(players.size()) +
             " players needs 2^" + std::to_string(players.size()) +
             " coalition values; the limit is " + std::to_string(limit) +
             " players");
  }
}

}  // namespace

ExactAttribution ShapleyFromGame(std::span<const double> game, std::size_t m) {
  CheckGame(game, m);
  // weight(s) = s!(m-s-1)!/m! = 1 / (m * C(m-1, s))
  std::vector<double> weight(m);
  for (std::size_t s = 0; s < m; ++s) {
    weight[s] = 1.0 / (static_cast<double>(m) * internal::Binomial(m - 1, s));
  }
  ExactAttribution out;
  out.phi.assign(m, 0.0);
  for (std::uint64_t mask = 0; mask < game.size(); ++mask) {
    const Coalition coalition(mask);
    const double w = coalition.size() < m ? weight[coalition.size()] : 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (coalition.contains(j)) continue;
      out.phi[j] += w * (game[coalition.with(j).bits()] - game[mask]);
    }
  }
  out.phi0 = game.front();
  out.prediction = game.back();
  return out;
}

double InteractionIndexFromGame(std::span<const double> game, std::size_t m,
                                std::size_t a, std::size_t b) {
  CheckGame(game, m);
  if (m < 2 || a == b || a >= m || b >= m) {
    Fail(ErrorKind::kInvalidArgument, "interaction needs two distinct players");
  }
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < game.size(); ++mask) {
    const Coalition s(mask);
    if (s.contains(a) || s.contains(b)) continue;
    // s!(m-s-2)!/(m-1)! = 1 / ((m-1) * C(m-2, s))
    const double w = 1.0 / (static_cast<double>(m - 1) *
                            internal::Binomial(m - 2, s.size()));
    total += w * (game[s.with(a).with(b).bits()] - game[s.with(a).bits()] -
                  game[s.with(b).bits()] + game[mask]);
  }
  return total;
}

GeoComponents GeoShapleyFromGame(std::span<const double> game, std::size_t m) {
  CheckGame(game, m);
  if (m < 2) Fail(ErrorKind::kInvalidArgument, "GeoShapley needs GEO plus a feature");
  const std::size_t geo = m - 1;
  const std::size_t p = m - 1;
  const ExactAttribution shapley = ShapleyFromGame(game, m);
  GeoComponents out;
  out.phi0 = shapley.phi0;
  out.prediction = shapley.prediction;
  out.phi.resize(p);
  out.phi_geo_x.resize(p);
  out.phi_geo = shapley.phi[geo];
  for (std::size_t j = 0; j < p; ++j) {
    const double interaction = InteractionIndexFromGame(game, m, geo, j);
    out.phi_geo_x[j] = interaction;
    out.phi[j] = shapley.phi[j] - 0.5 * interaction;
    out.phi_geo -= 0.5 * interaction;
  }
  return out;
}

ExactAttribution ShapleyExact(const PredictionOracle& oracle,
                              const Vector& instance,
                              const BackgroundSet& background,
                              const PlayerIndex& players,
                              ExactOptions options) {
  CheckPlayerLimit(players, options.max_players);
  const std::vector<double> game =
      TabulateGame(oracle, instance, background, players);
  return ShapleyFromGame(game, players.size());
}

GeoComponents GeoShapleyEnumerated(const PredictionOracle& oracle,
                                   const Vector& instance,
                                   const BackgroundSet& background,
                                   const PlayerIndex& players,
                                   ExactOptions options) {
  if (!players.has_geo()) {
    Fail(ErrorKind::kInvalidArgument, "GeoShapley requires the GEO player");
  }
  CheckPlayerLimit(players, options.max_players);
  const std::vector<double> game =
      TabulateGame(oracle, instance, background, players);
  return GeoShapleyFromGame(game, players.size());
}

}  // namespace geoshap

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

#ifndef GEOSHAP_VALUE_FUNCTION_HPP_
#define GEOSHAP_VALUE_FUNCTION_HPP_

#include <span>
#include <vector>

#include "geoshap/dataset.hpp"
#include "geoshap/oracle.hpp"
#include "geoshap/players.hpp"

namespace geoshap {

// Interventional value of a coalition: the mean model output over background
// rows b, where each composite row takes the instance's columns for coalition
// members and row b's columns otherwise. One oracle batch of k rows.
//
// The full coalition returns f(instance) exactly and the empty coalition is
// the background mean prediction.
double CoalitionValue(const PredictionOracle& oracle, const Vector& instance,
                      Coalition coalition, const BackgroundSet& background,
                      const PlayerIndex& players);

// Values for many coalitions of one instance. Composites are packed into
// oracle batches of at most max_batch_rows rows (never splitting a
// coalition), so the result equals calling CoalitionValue per coalition.
std::vector<double> CoalitionValues(const PredictionOracle& oracle,
                                    const Vector& instance,
                                    std::span<const Coalition> coalitions,
                                    const BackgroundSet& background,
                                    const PlayerIndex& players,
                                    std::size_t max_batch_rows = 1 << 16);

// Values of all 2^m coalitions indexed by bitmask.
std::vector<double> TabulateGame(const PredictionOracle& oracle,
                                 const Vector& instance,
                                 const BackgroundSet& background,
                                 const PlayerIndex& players);

}  // namespace geoshap

#endif  // GEOSHAP_VALUE_FUNCTION_HPP_

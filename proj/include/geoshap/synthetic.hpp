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

#ifndef GEOSHAP_SYNTHETIC_HPP_
#define GEOSHAP_SYNTHETIC_HPP_

#include <cstdint>

#include "geoshap/dataset.hpp"

namespace geoshap {

// Simulated spatial process with known ground truth. Everything is
// regenerable from (n, seed, noise_sd, null_features).
struct SyntheticTruth {
  DataSet data;
  Vector beta0;   // true local intercept per row
  Matrix betas;   // n x p true local coefficients (zero for null features)
  Vector signal;  // noise-free response
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
};

// Spatially varying coefficient process on the unit square:
//   y = 3(u + v) + (1 + 2u) x1 + 2 x2 + sum_k 0 * z_k + eps
// with x1, x2 and the optional null features z_k standard normal.
SyntheticTruth GenerateSvc(std::size_t n, std::uint64_t seed, double noise_sd,
                           std::size_t null_features = 0);

// y = 2 tanh(1.5 x1) + eps with x2 irrelevant and no spatial term.
SyntheticTruth GenerateNonlinear(std::size_t n, std::uint64_t seed,
                                 double noise_sd = 0.1);

double SCurve(double x);

}  // namespace geoshap

#endif  // GEOSHAP_SYNTHETIC_HPP_

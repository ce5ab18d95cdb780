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

#ifndef GEOSHAP_EXPLANATION_HPP_
#define GEOSHAP_EXPLANATION_HPP_

#include <array>
#include <string>
#include <vector>

namespace geoshap {

// Additive decomposition of one prediction:
//
//   prediction = phi0 + phi_geo + sum_j phi[j] + sum_j phi_geo_x[j]
//
// phi_geo is the intrinsic location effect, phi[j] the location-invariant
// (primary) effect of feature j and phi_geo_x[j] the GEO x feature j
// interaction. Without a location player phi_geo and phi_geo_x are zero and
// phi holds ordinary Shapley values.
struct GeoComponents {
  double phi0 = 0.0;
  double phi_geo = 0.0;
  std::vector<double> phi;
  std::vector<double> phi_geo_x;
  double prediction = 0.0;

  double sum() const;
  // Combined effect phi[j] + phi_geo_x[j], the quantity smoothed into local
  // coefficients.
  double combined(std::size_t j) const { return phi[j] + phi_geo_x[j]; }
};

bool VerifyEfficiency(const GeoComponents& components, double tol);

struct ExplanationRow {
  std::string row_id;
  std::array<double, 2> coords{};
  GeoComponents components;
};

struct ExplanationSet {
  std::vector<std::string> feature_names;
  bool include_geo = true;
  std::vector<ExplanationRow> rows;

  std::size_t n_features() const { return feature_names.size(); }
  // phi0 of the first row. With a location player every row shares it.
  double base_value() const;
};

}  // namespace geoshap

#endif  // GEOSHAP_EXPLANATION_HPP_

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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geoshap/analysis.hpp"
#include "geoshap/error.hpp"

namespace geoshap {

const ImportanceRow& ImportanceTable::at(const std::string& name) const {
  for (const auto& row : rows) {
    if (row.name == name) return row;
  }
  Fail(ErrorKind::kInvalidArgument, "no importance row named '" + name + "'");
}

ImportanceTable GlobalImportance(const ExplanationSet& explanations) {
  if (explanations.rows.empty()) {
    Fail(ErrorKind::kInvalidArgument, "importance needs at least one explanation");
  }
  const std::size_t p = explanations.n_features();
  std::vector<double> primary(p, 0.0), geo(p, 0.0);
  double location = 0.0;
  for (const auto& row : explanations.rows) {
    const auto& c = row.components;
    location += std::abs(c.phi_geo);
    for (std::size_t j = 0; j < p; ++j) {
      primary[j] += std::abs(c.phi[j]);
      geo[j] += std::abs(c.phi_geo_x[j]);
    }
  }
  const auto n = static_cast<double>(explanations.rows.size());
  ImportanceTable table;
  for (std::size_t j = 0; j < p; ++j) {
    ImportanceRow row;
    row.name = explanations.feature_names[j];
    row.primary = primary[j] / n;
    row.geo = geo[j] / n;
    row.total = row.primary + row.geo;
    table.rows.push_back(std::move(row));
  }
  if (explanations.include_geo) {
    ImportanceRow row;
    row.name = kGeoName;
    row.is_geo = true;
    row.primary = location / n;
    row.total = row.primary;
    table.rows.push_back(std::move(row));
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ImportanceRow& a, const ImportanceRow& b) {
              if (a.total != b.total) return a.total > b.total;
              return a.name < b.name;
            });
  return table;
}

std::vector<DependencePoint> PdpPoints(const ExplanationSet& explanations,
                                       const DataSet& data,
                                       const std::string& feature) {
  if (explanations.rows.size() != data.n_rows()) {
    Fail(ErrorKind::kInvalidArgument, "explanations and data have different row counts");
  }
  const auto it = std::find(explanations.feature_names.begin(),
                            explanations.feature_names.end(), feature);
  if (it == explanations.feature_names.end()) {
    Fail(ErrorKind::kInvalidArgument, "unknown feature '" + feature + "'");
  }
  const auto j = static_cast<std::size_t>(it - explanations.feature_names.begin());
  const std::size_t column = data.feature_index(feature);
  std::vector<DependencePoint> points(data.n_rows());
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i] = {data.features()(static_cast<Eigen::Index>(i),
                                 static_cast<Eigen::Index>(column)),
                 explanations.rows[i].components.phi[j], i};
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const DependencePoint& a, const DependencePoint& b) {
                     return a.x < b.x;
                   });
  return points;
}

}  // namespace geoshap

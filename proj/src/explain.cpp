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

#include <optional>
#include <string>

#include "geoshap/error.hpp"
#include "geoshap/kernel.hpp"
#include "geoshap/parallel.hpp"
#include "geoshap/value_function.hpp"

namespace geoshap {

ExplanationSet Explain(const DataSet& data, const PredictionOracle& oracle,
                       const BackgroundSet& background,
                       const ExplainConfig& config) {
  CheckOracleColumns(oracle, data.n_columns());
  if (background.n_columns() != data.n_columns()) {
    Fail(ErrorKind::kData, "background has " +
                               std::to_string(background.n_columns()) +
                               " columns, dataset layout has " +
                               std::to_string(data.n_columns()));
  }
  const GeoKernelEstimator estimator(data.n_features(), config.include_geo,
                                     config.budget, config.seed, config.solver);

  ExplanationSet out;
  out.feature_names = data.feature_names();
  out.include_geo = config.include_geo;
  out.rows.resize(data.n_rows());
  std::vector<std::optional<std::string>> failures(data.n_rows());

  // Oracles that cannot take concurrent calls are driven from one thread.
  const std::size_t threads = oracle.concurrency_safe() ? config.threads : 1;
  ParallelFor(data.n_rows(), threads, [&](std::size_t i) {
    try {
      const Vector instance = data.model_row(i);
      const std::vector<double> values =
          CoalitionValues(oracle, instance, estimator.coalitions(), background,
                          estimator.players());
      ExplanationRow& row = out.rows[i];
      row.row_id = data.row_ids()[i];
      row.coords = {data.coords()(static_cast<Eigen::Index>(i), 0),
                    data.coords()(static_cast<Eigen::Index>(i), 1)};
      row.components = estimator.Solve(values);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  std::size_t failed = 0;
  std::string message;
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    if (failed < 5) message += "\n  row " + data.row_ids()[i] + ": " + *failures[i];
    ++failed;
  }
  if (failed > 0) {
    Fail(ErrorKind::kModel, std::to_string(failed) + " of " +
                                std::to_string(data.n_rows()) +
                                " rows could not be explained:" + message);
  }
  return out;
}

}  // namespace geoshap

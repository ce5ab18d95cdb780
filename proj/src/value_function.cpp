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

#include "geoshap/value_function.hpp"

#include <cmath>

#include "geoshap/error.hpp"

namespace geoshap {

Vector FunctionOracle::predict(const Matrix& rows) const {
  Vector out(rows.rows());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    out(r) = fn_(std::span<const double>(rows.row(r).data(),
                                         static_cast<std::size_t>(rows.cols())));
  }
  return out;
}

void CheckOracleColumns(const PredictionOracle& oracle, std::size_t expected) {
  if (oracle.n_columns() != expected) {
    Fail(ErrorKind::kModel, "model expects " +
                                std::to_string(oracle.n_columns()) +
                                " columns but the dataset layout has " +
                                std::to_string(expected));
  }
}

namespace {

void CheckInstance(const Vector& instance, const BackgroundSet& background,
                   const PlayerIndex& players) {
  if (static_cast<std::size_t>(instance.size()) != players.n_columns() ||
      background.n_columns() != players.n_columns()) {
    Fail(ErrorKind::kInvalidArgument,
         "instance, background and player layout disagree on column count");
  }
}

void FillComposites(const Vector& instance, Coalition coalition,
                    const BackgroundSet& background, const PlayerIndex& players,
                    Matrix& batch, Eigen::Index offset) {
  const auto k = static_cast<Eigen::Index>(background.size());
  batch.middleRows(offset, k) = background.rows();
  const std::vector<bool> from_instance = players.instance_columns(coalition);
  for (std::size_t c = 0; c < from_instance.size(); ++c) {
    if (!from_instance[c]) continue;
    batch.block(offset, static_cast<Eigen::Index>(c), k, 1).setConstant(
        instance(static_cast<Eigen::Index>(c)));
  }
}

// Mean of one coalition's k predictions. Identical predictions return the
// common value unchanged so the full coalition reproduces f(instance) bit for
// bit.
double MeanPrediction(const Vector& predictions, Eigen::Index offset,
                      Eigen::Index k, Coalition coalition,
                      const PlayerIndex& players) {
  const double first = predictions(offset);
  bool identical = true;
  double sum = 0.0;
  for (Eigen::Index b = 0; b < k; ++b) {
    const double value = predictions(offset + b);
    if (!std::isfinite(value)) {
      Fail(ErrorKind::kModel,
           "non-finite prediction for coalition " +
               ToString(coalition, players.size()) + " at background row " +
               std::to_string(b));
    }
    identical = identical && value == first;
    sum += value;
  }
  return identical ? first : sum / static_cast<double>(k);
}

Vector Predict(const PredictionOracle& oracle, const Matrix& batch,
               Coalition first, Coalition last, const PlayerIndex& players) {
  Vector predictions;
  try {
    predictions = oracle.predict(batch);
  } catch (const Error& e) {
    throw Error(e.kind(), "model failed on batch for coalitions " +
                              ToString(first, players.size()) + ".." +
                              ToString(last, players.size()) + ": " + e.what());
  } catch (const std::exception& e) {
    Fail(ErrorKind::kModel, "model failed on batch for coalitions " +
                                ToString(first, players.size()) + ".." +
                                ToString(last, players.size()) + ": " + e.what());
  }
  if (predictions.size() != batch.rows()) {
    Fail(ErrorKind::kModel, "model returned " +
                                std::to_string(predictions.size()) +
                                " predictions for " +
                                std::to_string(batch.rows()) + " rows");
  }
  return predictions;
}

}  // namespace

double CoalitionValue(const PredictionOracle& oracle, const Vector& instance,
                      Coalition coalition, const BackgroundSet& background,
                      const PlayerIndex& players) {
  const Coalition one[] = {coalition};
  return CoalitionValues(oracle, instance, one, background, players).front();
}

std::vector<double> CoalitionValues(const PredictionOracle& oracle,
                                    const Vector& instance,
                                    std::span<const Coalition> coalitions,
                                    const BackgroundSet& background,
                                    const PlayerIndex& players,
                                    std::size_t max_batch_rows) {
  CheckInstance(instance, background, players);
  CheckOracleColumns(oracle, players.n_columns());
  const auto k = static_cast<Eigen::Index>(background.size());
  const std::size_t per_batch =
      std::max<std::size_t>(1, max_batch_rows / background.size());
  std::vector<double> values;
  values.reserve(coalitions.size());
  Matrix batch;
  for (std::size_t start = 0; start < coalitions.size(); start += per_batch) {
    const std::size_t count = std::min(per_batch, coalitions.size() - start);
    batch.resize(static_cast<Eigen::Index>(count) * k,
                 static_cast<Eigen::Index>(players.n_columns()));
    for (std::size_t c = 0; c < count; ++c) {
      FillComposites(instance, coalitions[start + c], background, players,
                     batch, static_cast<Eigen::Index>(c) * k);
    }
    const Vector predictions =
        Predict(oracle, batch, coalitions[start],
                coalitions[start + count - 1], players);
    for (std::size_t c = 0; c < count; ++c) {
      values.push_back(MeanPrediction(predictions,
                                      static_cast<Eigen::Index>(c) * k, k,
                                      coalitions[start + c], players));
    }
  }
  return values;
}

std::vector<double> TabulateGame(const PredictionOracle& oracle,
                                 const Vector& instance,
                                 const BackgroundSet& background,
                                 const PlayerIndex& players) {
  const std::size_t m = players.size();
  if (m > 24) {
    Fail(ErrorKind::kBudget, "refusing to tabulate 2^" + std::to_string(m) +
                                 " coalitions");
  }
  std::vector<Coalition> all(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < all.size(); ++mask) all[mask] = Coalition(mask);
  return CoalitionValues(oracle, instance, all, background, players);
}

}  // namespace geoshap

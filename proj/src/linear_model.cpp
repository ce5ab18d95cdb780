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
#include <numeric>
#include <random>

#include "geoshap/error.hpp"
#include "geoshap/models.hpp"

namespace geoshap {

const char* ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinear: return "linear";
    case ModelKind::kKernelRidge: return "krr";
    case ModelKind::kBoostedTrees: return "gbt";
  }
  return "unknown";
}

ModelKind ParseModelKind(std::string_view name) {
  if (name == "linear") return ModelKind::kLinear;
  if (name == "krr") return ModelKind::kKernelRidge;
  if (name == "gbt") return ModelKind::kBoostedTrees;
  Fail(ErrorKind::kInvalidArgument,
       "unknown model kind '" + std::string(name) + "' (linear, krr, gbt)");
}

LinearModel::LinearModel(double intercept, Vector coefficients)
    : intercept_(intercept), coefficients_(std::move(coefficients)) {}

Vector LinearModel::predict(const Matrix& rows) const {
  if (rows.cols() != coefficients_.size()) {
    Fail(ErrorKind::kModel, "linear model expects " +
                                std::to_string(coefficients_.size()) + " columns");
  }
  return (rows * coefficients_).array() + intercept_;
}

LinearModel TrainLinear(const Matrix& rows, const Vector& targets) {
  const auto n = rows.rows();
  const auto c = rows.cols();
  if (targets.size() != n) Fail(ErrorKind::kData, "target length mismatch");
  if (n <= c + 1) {
    Fail(ErrorKind::kData, "linear model needs more than " +
                               std::to_string(c + 1) + " rows, got " +
                               std::to_string(n));
  }
  Eigen::MatrixXd design(n, c + 1);
  design.col(0).setOnes();
  design.rightCols(c) = rows;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < c + 1) {
    Fail(ErrorKind::kNumerical, "design matrix is rank deficient (rank " +
                                    std::to_string(qr.rank()) + " of " +
                                    std::to_string(c + 1) + ")");
  }
  const Vector beta = qr.solve(targets);
  return LinearModel(beta(0), beta.tail(c));
}

OraclePtr LinearTrainer::fit(const Matrix& rows, const Vector& targets) const {
  return std::make_shared<LinearModel>(TrainLinear(rows, targets));
}

double RSquared(const Vector& targets, const Vector& predictions) {
  const double mean = targets.mean();
  const double total = (targets.array() - mean).square().sum();
  const double residual = (targets - predictions).squaredNorm();
  if (total == 0.0) return residual == 0.0 ? 1.0 : 0.0;
  return 1.0 - residual / total;
}

double CrossValidatedR2(const Trainer& trainer, const Matrix& rows,
                        const Vector& targets, std::size_t folds,
                        std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(rows.rows());
  if (folds < 2 || folds > n) {
    Fail(ErrorKind::kInvalidArgument, "fold count must be in [2, n]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t i = 0; i < n; ++i) fold_of[order[i]] = i % folds;

  Vector out_of_fold(static_cast<Eigen::Index>(n));
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (std::size_t i = 0; i < n; ++i) {
      (fold_of[i] == f ? test : train).push_back(static_cast<Eigen::Index>(i));
    }
    const Matrix train_rows = rows(train, Eigen::all);
    const Vector train_targets = targets(train);
    const OraclePtr model = trainer.fit(train_rows, train_targets);
    const Vector predicted = model->predict(rows(test, Eigen::all));
    for (std::size_t t = 0; t < test.size(); ++t) {
      out_of_fold(test[t]) = predicted(static_cast<Eigen::Index>(t));
    }
  }
  return RSquared(targets, out_of_fold);
}

}  // namespace geoshap

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

#include <cmath>

#include "geoshap/error.hpp"
#include "geoshap/models.hpp"

namespace geoshap {

namespace {

Eigen::MatrixXd RbfKernel(const Matrix& a, const Matrix& b, double lengthscale) {
  const Vector a_sq = a.rowwise().squaredNorm();
  const Vector b_sq = b.rowwise().squaredNorm();
  Eigen::MatrixXd dist = (-2.0 * a * b.transpose());
  dist.colwise() += a_sq;
  dist.rowwise() += b_sq.transpose();
  const double scale = -0.5 / (lengthscale * lengthscale);
  return (dist.array().max(0.0) * scale).exp();
}

}  // namespace

KernelRidgeModel::KernelRidgeModel(Matrix support, Vector alpha, double offset,
                                   double lengthscale, double ridge)
    : support_(std::move(support)),
      alpha_(std::move(alpha)),
      offset_(offset),
      lengthscale_(lengthscale),
      ridge_(ridge) {}

Vector KernelRidgeModel::predict(const Matrix& rows) const {
  if (rows.cols() != support_.cols()) {
    Fail(ErrorKind::kModel, "kernel ridge model expects " +
                                std::to_string(support_.cols()) + " columns");
  }
  if (rows.rows() == 0) return Vector(0);
  return (RbfKernel(rows, support_, lengthscale_) * alpha_).array() + offset_;
}

KernelRidgeModel TrainKernelRidge(const Matrix& rows, const Vector& targets,
                                  double lengthscale, double ridge) {
  if (!(ridge > 0.0)) Fail(ErrorKind::kInvalidArgument, "ridge must be positive");
  if (!(lengthscale > 0.0)) {
    Fail(ErrorKind::kInvalidArgument, "lengthscale must be positive");
  }
  if (targets.size() != rows.rows() || rows.rows() == 0) {
    Fail(ErrorKind::kData, "kernel ridge needs matching, non-empty rows and targets");
  }
  const double offset = targets.mean();
  const Vector centered = targets.array() - offset;
  Eigen::MatrixXd gram = RbfKernel(rows, rows, lengthscale);
  gram.diagonal().array() += ridge;

  double jitter = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() == Eigen::Success) {
      Vector alpha = llt.solve(centered);
      if (alpha.allFinite()) {
        return KernelRidgeModel(rows, std::move(alpha), offset, lengthscale, ridge);
      }
    }
    const double next = jitter == 0.0 ? 1e-10 : jitter * 100.0;
    gram.diagonal().array() += next - jitter;
    jitter = next;
  }
  Fail(ErrorKind::kNumerical,
       "kernel matrix is not positive definite after jitter " +
           std::to_string(jitter));
}

OraclePtr KernelRidgeTrainer::fit(const Matrix& rows, const Vector& targets) const {
  return std::make_shared<KernelRidgeModel>(
      TrainKernelRidge(rows, targets, lengthscale_, ridge_));
}

}  // namespace geoshap

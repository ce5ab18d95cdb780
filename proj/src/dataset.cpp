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

#include "geoshap/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "geoshap/error.hpp"

namespace geoshap {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kModel: return "model error";
    case ErrorKind::kNumerical: return "numerical error";
    case ErrorKind::kBudget: return "budget error";
    case ErrorKind::kBridge: return "bridge error";
    case ErrorKind::kIo: return "io error";
  }
  return "error";
}

namespace {

std::vector<std::string> DefaultRowIds(Eigen::Index n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

}  // namespace

DataSet::DataSet(std::vector<std::string> feature_names, Matrix features,
                 Matrix coords, std::optional<Vector> target,
                 std::vector<std::string> row_ids)
    : feature_names_(std::move(feature_names)),
      features_(std::move(features)),
      coords_(std::move(coords)),
      target_(std::move(target)),
      row_ids_(std::move(row_ids)) {
  const auto n = features_.rows();
  if (n < 1) Fail(ErrorKind::kData, "dataset must contain at least one row");
  if (feature_names_.empty()) {
    Fail(ErrorKind::kData, "dataset must contain at least one feature");
  }
  if (static_cast<std::size_t>(features_.cols()) != feature_names_.size()) {
    Fail(ErrorKind::kData, "feature matrix has " +
                               std::to_string(features_.cols()) +
                               " columns but " +
                               std::to_string(feature_names_.size()) +
                               " names were given");
  }
  if (coords_.rows() != n || coords_.cols() != 2) {
    Fail(ErrorKind::kData, "coordinates must be an n x 2 matrix");
  }
  if (target_ && target_->size() != n) {
    Fail(ErrorKind::kData, "target length does not match row count");
  }
  if (static_cast<Eigen::Index>(row_ids_.size()) != n) {
    Fail(ErrorKind::kData, "row id count does not match row count");
  }
  std::set<std::string> seen;
  for (const auto& name : feature_names_) {
    if (!seen.insert(name).second) {
      Fail(ErrorKind::kData, "duplicate feature name '" + name + "'");
    }
  }
  if (!features_.allFinite()) Fail(ErrorKind::kData, "non-finite feature value");
  if (!coords_.allFinite()) Fail(ErrorKind::kData, "non-finite coordinate value");
}

DataSet::DataSet(std::vector<std::string> feature_names, Matrix features,
                 Matrix coords, std::optional<Vector> target)
    : DataSet(std::move(feature_names), features, std::move(coords),
              std::move(target), DefaultRowIds(features.rows())) {}

std::size_t DataSet::feature_index(const std::string& name) const {
  auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
  if (it == feature_names_.end()) {
    Fail(ErrorKind::kInvalidArgument, "unknown feature '" + name + "'");
  }
  return static_cast<std::size_t>(it - feature_names_.begin());
}

Matrix DataSet::model_matrix() const {
  Matrix out(features_.rows(), features_.cols() + 2);
  out.leftCols(features_.cols()) = features_;
  out.rightCols(2) = coords_;
  return out;
}

Vector DataSet::model_row(std::size_t i) const {
  const auto p = features_.cols();
  Vector row(p + 2);
  row.head(p) = features_.row(static_cast<Eigen::Index>(i)).transpose();
  row.tail(2) = coords_.row(static_cast<Eigen::Index>(i)).transpose();
  return row;
}

DataSet DataSet::subset(const std::vector<std::size_t>& rows) const {
  const auto k = static_cast<Eigen::Index>(rows.size());
  Matrix features(k, features_.cols());
  Matrix coords(k, 2);
  std::optional<Vector> target;
  if (target_) target = Vector(k);
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto src = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]);
    features.row(r) = features_.row(src);
    coords.row(r) = coords_.row(src);
    if (target_) (*target)(r) = (*target_)(src);
    ids.push_back(row_ids_[static_cast<std::size_t>(src)]);
  }
  return DataSet(feature_names_, std::move(features), std::move(coords),
                 std::move(target), std::move(ids));
}

BackgroundSet::BackgroundSet(Matrix rows, Provenance provenance,
                             std::uint64_t seed)
    : rows_(std::move(rows)), provenance_(provenance), seed_(seed) {
  if (rows_.rows() < 1) Fail(ErrorKind::kData, "background set is empty");
  if (!rows_.allFinite()) Fail(ErrorKind::kData, "non-finite background value");
}

BackgroundSet BackgroundSet::Sample(const DataSet& data, std::size_t k,
                                    std::uint64_t seed) {
  if (k == 0) Fail(ErrorKind::kInvalidArgument, "background size must be >= 1");
  const std::size_t n = data.n_rows();
  k = std::min(k, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first k slots form the sample.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  order.resize(k);
  std::sort(order.begin(), order.end());
  const Matrix all = data.model_matrix();
  Matrix rows(static_cast<Eigen::Index>(k), all.cols());
  for (std::size_t r = 0; r < k; ++r) {
    rows.row(static_cast<Eigen::Index>(r)) =
        all.row(static_cast<Eigen::Index>(order[r]));
  }
  return BackgroundSet(std::move(rows), Provenance::kSampled, seed);
}

Vector BackgroundSet::column_means() const {
  return rows_.colwise().mean().transpose();
}

}  // namespace geoshap

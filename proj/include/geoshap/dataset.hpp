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

#ifndef GEOSHAP_DATASET_HPP_
#define GEOSHAP_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace geoshap {

// Observations are rows; row-major keeps one instance contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Tabular observations with one coordinate pair per row.
//
// The model input layout used throughout the library is the p feature columns
// followed by the two coordinate columns, i.e. an n x (p + 2) matrix.
class DataSet {
 public:
  DataSet(std::vector<std::string> feature_names, Matrix features,
          Matrix coords, std::optional<Vector> target,
          std::vector<std::string> row_ids);

  // Row ids default to "0", "1", ...
  DataSet(std::vector<std::string> feature_names, Matrix features,
          Matrix coords, std::optional<Vector> target = std::nullopt);

  std::size_t n_rows() const { return static_cast<std::size_t>(features_.rows()); }
  std::size_t n_features() const { return feature_names_.size(); }
  // p + 2.
  std::size_t n_columns() const { return n_features() + 2; }

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const Matrix& features() const { return features_; }
  const Matrix& coords() const { return coords_; }
  const std::optional<Vector>& target() const { return target_; }
  const std::vector<std::string>& row_ids() const { return row_ids_; }

  // Index of the named feature; throws kInvalidArgument if absent.
  std::size_t feature_index(const std::string& name) const;

  // Features followed by coordinates.
  Matrix model_matrix() const;
  Vector model_row(std::size_t i) const;

  // Rows gathered by index (repeats allowed), as used by resampling.
  DataSet subset(const std::vector<std::size_t>& rows) const;

 private:
  std::vector<std::string> feature_names_;
  Matrix features_;
  Matrix coords_;
  std::optional<Vector> target_;
  std::vector<std::string> row_ids_;
};

// Reference rows that stand in for "absent" players.
class BackgroundSet {
 public:
  enum class Provenance { kSampled, kUserSupplied };

  // rows: k x (p + 2), same column layout as DataSet::model_matrix().
  explicit BackgroundSet(Matrix rows,
                         Provenance provenance = Provenance::kUserSupplied,
                         std::uint64_t seed = 0);

  // k rows sampled without replacement; k > n clamps to n.
  static BackgroundSet Sample(const DataSet& data, std::size_t k,
                              std::uint64_t seed);

  std::size_t size() const { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t n_columns() const { return static_cast<std::size_t>(rows_.cols()); }
  const Matrix& rows() const { return rows_; }
  Provenance provenance() const { return provenance_; }
  std::uint64_t seed() const { return seed_; }
  // Column means; used by linear attribution checks.
  Vector column_means() const;

 private:
  Matrix rows_;
  Provenance provenance_;
  std::uint64_t seed_;
};

inline constexpr std::size_t kDefaultBackgroundSize = 100;

}  // namespace geoshap

#endif  // GEOSHAP_DATASET_HPP_

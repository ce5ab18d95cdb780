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

#ifndef GEOSHAP_ORACLE_HPP_
#define GEOSHAP_ORACLE_HPP_

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "geoshap/dataset.hpp"

namespace geoshap {

// Opaque batch model: r x (p + 2) rows in, r predictions out. predict() must
// be deterministic for a fixed oracle state and may be called from several
// threads; implementations that cannot run concurrently serialize internally
// and report concurrency_safe() == false.
class PredictionOracle {
 public:
  virtual ~PredictionOracle() = default;

  virtual Vector predict(const Matrix& rows) const = 0;
  virtual std::size_t n_columns() const = 0;
  virtual bool concurrency_safe() const { return true; }
};

using OraclePtr = std::shared_ptr<const PredictionOracle>;

// Produces a fresh oracle fitted to (rows, targets). Used by bootstrap and
// cross-validation; a trainer never mutates oracles it returned earlier.
class Trainer {
 public:
  virtual ~Trainer() = default;

  virtual OraclePtr fit(const Matrix& rows, const Vector& targets) const = 0;
  virtual std::string name() const = 0;
};

using TrainerPtr = std::shared_ptr<const Trainer>;

// Wraps a per-row function; handy for constructed models in tests and for
// callers embedding closed-form models.
class FunctionOracle final : public PredictionOracle {
 public:
  using RowFunction = std::function<double(std::span<const double>)>;

  FunctionOracle(std::size_t n_columns, RowFunction fn)
      : n_columns_(n_columns), fn_(std::move(fn)) {}

  Vector predict(const Matrix& rows) const override;
  std::size_t n_columns() const override { return n_columns_; }

 private:
  std::size_t n_columns_;
  RowFunction fn_;
};

// Throws kModel unless oracle width matches the dataset layout.
void CheckOracleColumns(const PredictionOracle& oracle, std::size_t expected);

}  // namespace geoshap

#endif  // GEOSHAP_ORACLE_HPP_

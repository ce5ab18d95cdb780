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

#ifndef GEOSHAP_MODELS_HPP_
#define GEOSHAP_MODELS_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "geoshap/dataset.hpp"
#include "geoshap/oracle.hpp"

namespace geoshap {

enum class ModelKind { kLinear, kKernelRidge, kBoostedTrees };

const char* ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);

// Built-in model with a serializable state.
class TrainedModel : public PredictionOracle {
 public:
  virtual ModelKind kind() const = 0;
};

using TrainedModelPtr = std::shared_ptr<const TrainedModel>;

// ---------------------------------------------------------------------------
// Ordinary least squares with intercept.

class LinearModel final : public TrainedModel {
 public:
  LinearModel(double intercept, Vector coefficients);

  Vector predict(const Matrix& rows) const override;
  std::size_t n_columns() const override {
    return static_cast<std::size_t>(coefficients_.size());
  }
  ModelKind kind() const override { return ModelKind::kLinear; }

  double intercept() const { return intercept_; }
  const Vector& coefficients() const { return coefficients_; }

 private:
  double intercept_;
  Vector coefficients_;
};

// Requires n > columns + 1 and full column rank.
LinearModel TrainLinear(const Matrix& rows, const Vector& targets);

// ---------------------------------------------------------------------------
// Radial-basis kernel ridge regression on centered targets:
//   (K + ridge I) alpha = y - mean(y),  f(x) = mean(y) + sum_i alpha_i k(x, x_i)
// with k(a, b) = exp(-|a - b|^2 / (2 lengthscale^2)).

class KernelRidgeModel final : public TrainedModel {
 public:
  KernelRidgeModel(Matrix support, Vector alpha, double offset,
                   double lengthscale, double ridge);

  Vector predict(const Matrix& rows) const override;
  std::size_t n_columns() const override {
    return static_cast<std::size_t>(support_.cols());
  }
  ModelKind kind() const override { return ModelKind::kKernelRidge; }

  const Matrix& support() const { return support_; }
  const Vector& alpha() const { return alpha_; }
  double offset() const { return offset_; }
  double lengthscale() const { return lengthscale_; }
  double ridge() const { return ridge_; }

 private:
  Matrix support_;
  Vector alpha_;
  double offset_;
  double lengthscale_;
  double ridge_;
};

KernelRidgeModel TrainKernelRidge(const Matrix& rows, const Vector& targets,
                                  double lengthscale, double ridge);

// ---------------------------------------------------------------------------
// Gradient-boosted regression trees, squared loss.

struct TreeNode {
  // Leaves have feature == -1 and carry value; internal nodes send
  // x[feature] <= threshold to left.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

using RegressionTree = std::vector<TreeNode>;

double PredictTree(const RegressionTree& tree, const double* row);

struct BoostedTreesConfig {
  int trees = 200;
  int depth = 3;
  double rate = 0.1;
  int min_leaf = 5;
  // Row fraction drawn (without replacement) per tree; 1 uses every row.
  double subsample = 1.0;
  std::uint64_t seed = 0;
};

class BoostedTreesModel final : public TrainedModel {
 public:
  BoostedTreesModel(std::size_t n_columns, double base,
                    std::vector<RegressionTree> trees);

  Vector predict(const Matrix& rows) const override;
  std::size_t n_columns() const override { return n_columns_; }
  ModelKind kind() const override { return ModelKind::kBoostedTrees; }

  double base() const { return base_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }
  // Training MSE after the base value and after each boosting round.
  const std::vector<double>& training_mse() const { return training_mse_; }
  void set_training_mse(std::vector<double> mse) { training_mse_ = std::move(mse); }

 private:
  std::size_t n_columns_;
  double base_;
  std::vector<RegressionTree> trees_;
  std::vector<double> training_mse_;
};

// Requires n >= 20. A target without variance yields a constant model.
BoostedTreesModel TrainBoostedTrees(const Matrix& rows, const Vector& targets,
                                    const BoostedTreesConfig& config = {});

// ---------------------------------------------------------------------------
// Trainers for resampling workflows.

class LinearTrainer final : public Trainer {
 public:
  OraclePtr fit(const Matrix& rows, const Vector& targets) const override;
  std::string name() const override { return "linear"; }
};

class KernelRidgeTrainer final : public Trainer {
 public:
  KernelRidgeTrainer(double lengthscale, double ridge)
      : lengthscale_(lengthscale), ridge_(ridge) {}
  OraclePtr fit(const Matrix& rows, const Vector& targets) const override;
  std::string name() const override { return "krr"; }

 private:
  double lengthscale_;
  double ridge_;
};

class BoostedTreesTrainer final : public Trainer {
 public:
  explicit BoostedTreesTrainer(BoostedTreesConfig config = {}) : config_(config) {}
  OraclePtr fit(const Matrix& rows, const Vector& targets) const override;
  std::string name() const override { return "gbt"; }

 private:
  BoostedTreesConfig config_;
};

// k-fold cross-validated out-of-sample R^2 with seeded fold assignment.
double CrossValidatedR2(const Trainer& trainer, const Matrix& rows,
                        const Vector& targets, std::size_t folds,
                        std::uint64_t seed);

double RSquared(const Vector& targets, const Vector& predictions);

// ---------------------------------------------------------------------------
// Versioned JSON artifact; doubles are written in shortest round-trip form so
// a load reproduces predictions bit for bit.

inline constexpr int kModelFormatVersion = 1;

std::string SerializeModel(const TrainedModel& model);
TrainedModelPtr DeserializeModel(std::string_view text);
void SaveModel(const TrainedModel& model, const std::filesystem::path& path);
TrainedModelPtr LoadModel(const std::filesystem::path& path);

}  // namespace geoshap

#endif  // GEOSHAP_MODELS_HPP_

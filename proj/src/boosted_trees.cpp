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
#include <random>

#include "geoshap/error.hpp"
#include "geoshap/models.hpp"

namespace geoshap {

double PredictTree(const RegressionTree& tree, const double* row) {
  int node = 0;
  while (tree[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& n = tree[static_cast<std::size_t>(node)];
    node = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return tree[static_cast<std::size_t>(node)].value;
}

BoostedTreesModel::BoostedTreesModel(std::size_t n_columns, double base,
                                     std::vector<RegressionTree> trees)
    : n_columns_(n_columns), base_(base), trees_(std::move(trees)) {}

Vector BoostedTreesModel::predict(const Matrix& rows) const {
  if (static_cast<std::size_t>(rows.cols()) != n_columns_) {
    Fail(ErrorKind::kModel, "boosted trees expect " + std::to_string(n_columns_) +
                                " columns, got " + std::to_string(rows.cols()));
  }
  Vector out(rows.rows());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const double* row = rows.row(r).data();
    double sum = base_;
    for (const auto& tree : trees_) sum += PredictTree(tree, row);
    out(r) = sum;
  }
  return out;
}

namespace {

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

// Per-node scan state while sweeping one feature in sorted order.
struct Sweep {
  double left_sum = 0.0;
  int left_count = 0;
  double last_value = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& rows,
              const std::vector<std::vector<int>>& sorted_by_feature,
              const BoostedTreesConfig& config)
      : rows_(rows), sorted_(sorted_by_feature), config_(config) {}

  // Fits one tree to residuals over the rows flagged in `in_sample`.
  RegressionTree Build(const std::vector<double>& residual,
                       const std::vector<char>& in_sample) {
    const std::size_t n = residual.size();
    RegressionTree tree(1);
    std::vector<int> node_of(n, -1);
    std::vector<double> sum(1, 0.0), sum_sq(1, 0.0);
    std::vector<int> count(1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_sample[i]) continue;
      node_of[i] = 0;
      sum[0] += residual[i];
      sum_sq[0] += residual[i] * residual[i];
      ++count[0];
    }
    std::vector<int> frontier = {0};
    for (int level = 0; level < config_.depth && !frontier.empty(); ++level) {
      const std::size_t nodes = tree.size();
      std::vector<SplitCandidate> best(nodes);
      std::vector<char> open(nodes, 0);
      for (int node : frontier) {
        open[static_cast<std::size_t>(node)] =
            count[static_cast<std::size_t>(node)] >= 2 * config_.min_leaf;
      }
      for (std::size_t f = 0; f < sorted_.size(); ++f) {
        std::vector<Sweep> sweep(nodes);
        for (int i : sorted_[f]) {
          const int node = node_of[static_cast<std::size_t>(i)];
          if (node < 0 || !open[static_cast<std::size_t>(node)]) continue;
          const auto a = static_cast<std::size_t>(node);
          const double x = rows_(i, static_cast<Eigen::Index>(f));
          Sweep& s = sweep[a];
          const int right_count = count[a] - s.left_count;
          if (s.left_count >= config_.min_leaf && right_count >= config_.min_leaf &&
              x > s.last_value) {
            const double right_sum = sum[a] - s.left_sum;
            const double gain = s.left_sum * s.left_sum / s.left_count +
                                right_sum * right_sum / right_count -
                                sum[a] * sum[a] / count[a];
            if (gain > best[a].gain) {
              double threshold = s.last_value + 0.5 * (x - s.last_value);
              if (!(threshold < x)) threshold = s.last_value;
              best[a] = {gain, static_cast<int>(f), threshold};
            }
          }
          s.left_sum += residual[static_cast<std::size_t>(i)];
          ++s.left_count;
          s.last_value = x;
        }
      }
      std::vector<int> next;
      std::vector<int> left_of(nodes, -1), right_of(nodes, -1);
      for (int node : frontier) {
        const auto a = static_cast<std::size_t>(node);
        const double sse = sum_sq[a] - (count[a] > 0 ? sum[a] * sum[a] / count[a] : 0.0);
        if (best[a].feature < 0 || best[a].gain <= 1e-12 * std::max(1.0, sse)) {
          continue;
        }
        tree[a].feature = best[a].feature;
        tree[a].threshold = best[a].threshold;
        tree[a].left = static_cast<int>(tree.size());
        tree[a].right = static_cast<int>(tree.size() + 1);
        left_of[a] = tree[a].left;
        right_of[a] = tree[a].right;
        tree.resize(tree.size() + 2);
        sum.resize(tree.size(), 0.0);
        sum_sq.resize(tree.size(), 0.0);
        count.resize(tree.size(), 0);
        next.push_back(tree[a].left);
        next.push_back(tree[a].right);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const int node = node_of[i];
        if (node < 0 || left_of[static_cast<std::size_t>(node)] < 0) continue;
        const TreeNode& split = tree[static_cast<std::size_t>(node)];
        const int child =
            rows_(static_cast<Eigen::Index>(i), split.feature) <= split.threshold
                ? split.left
                : split.right;
        node_of[i] = child;
        const auto c = static_cast<std::size_t>(child);
        sum[c] += residual[i];
        sum_sq[c] += residual[i] * residual[i];
        ++count[c];
      }
      frontier = std::move(next);
    }
    for (std::size_t a = 0; a < tree.size(); ++a) {
      if (tree[a].feature >= 0) continue;
      tree[a].value = count[a] > 0 ? config_.rate * sum[a] / count[a] : 0.0;
    }
    return tree;
  }

 private:
  const Matrix& rows_;
  const std::vector<std::vector<int>>& sorted_;
  const BoostedTreesConfig& config_;
};

}  // namespace

BoostedTreesModel TrainBoostedTrees(const Matrix& rows, const Vector& targets,
                                    const BoostedTreesConfig& config) {
  const auto n = static_cast<std::size_t>(rows.rows());
  if (targets.size() != rows.rows()) Fail(ErrorKind::kData, "target length mismatch");
  if (n < 20) {
    Fail(ErrorKind::kData, "boosted trees need at least 20 rows, got " +
                               std::to_string(n));
  }
  if (config.trees < 0 || config.depth < 1 || config.min_leaf < 1 ||
      !(config.rate > 0.0) || !(config.subsample > 0.0 && config.subsample <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "invalid boosted trees configuration");
  }
  if (!rows.allFinite() || !targets.allFinite()) {
    Fail(ErrorKind::kData, "non-finite training data");
  }
  const auto columns = static_cast<std::size_t>(rows.cols());
  const double base = targets.mean();
  std::vector<double> prediction(n, base);
  auto mse = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = targets(static_cast<Eigen::Index>(i)) - prediction[i];
      total += r * r;
    }
    return total / static_cast<double>(n);
  };
  std::vector<double> history = {mse()};
  const double variance = history.front();
  if (!(variance > 1e-24 * std::max(1.0, base * base))) {
    BoostedTreesModel constant(columns, base, {});
    constant.set_training_mse(std::move(history));
    return constant;
  }

  std::vector<std::vector<int>> sorted(columns, std::vector<int>(n));
  for (std::size_t f = 0; f < columns; ++f) {
    std::iota(sorted[f].begin(), sorted[f].end(), 0);
    const auto col = static_cast<Eigen::Index>(f);
    std::stable_sort(sorted[f].begin(), sorted[f].end(), [&](int a, int b) {
      return rows(a, col) < rows(b, col);
    });
  }

  TreeBuilder builder(rows, sorted, config);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto sample_size = static_cast<std::size_t>(
      std::max(1.0, std::round(config.subsample * static_cast<double>(n))));
  std::vector<char> in_sample(n, 1);
  std::vector<double> residual(n);
  std::vector<RegressionTree> trees;
  trees.reserve(static_cast<std::size_t>(config.trees));
  for (int t = 0; t < config.trees; ++t) {
    if (sample_size < n) {
      std::shuffle(order.begin(), order.end(), rng);
      std::fill(in_sample.begin(), in_sample.end(), 0);
      for (std::size_t i = 0; i < sample_size; ++i) in_sample[order[i]] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = targets(static_cast<Eigen::Index>(i)) - prediction[i];
    }
    RegressionTree tree = builder.Build(residual, in_sample);
    for (std::size_t i = 0; i < n; ++i) {
      prediction[i] += PredictTree(tree, rows.row(static_cast<Eigen::Index>(i)).data());
    }
    trees.push_back(std::move(tree));
    history.push_back(mse());
  }
  BoostedTreesModel model(columns, base, std::move(trees));
  model.set_training_mse(std::move(history));
  return model;
}

OraclePtr BoostedTreesTrainer::fit(const Matrix& rows, const Vector& targets) const {
  return std::make_shared<BoostedTreesModel>(TrainBoostedTrees(rows, targets, config_));
}

}  // namespace geoshap

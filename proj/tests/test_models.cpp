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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "geoshap/error.hpp"
#include "geoshap/models.hpp"
#include "test_util.hpp"

namespace geoshap {
namespace {

struct Xy {
  Matrix x;
  Vector y;
};

Xy LinearData(std::size_t n, std::uint64_t seed, double noise) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Xy d{Matrix(static_cast<Eigen::Index>(n), 4), Vector(static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) d.x(i, j) = normal(rng);
    d.y(i) = 1.5 + 2.0 * d.x(i, 0) - 0.5 * d.x(i, 1) + 0.25 * d.x(i, 3) + noise * normal(rng);
  }
  return d;
}

TEST(Linear, RecoversNoiseFreeCoefficients) {
  const Xy d = LinearData(50, 1, 0.0);
  const LinearModel m = TrainLinear(d.x, d.y);
  EXPECT_NEAR(m.intercept(), 1.5, 1e-9);
  const Vector expected = (Vector(4) << 2.0, -0.5, 0.0, 0.25).finished();
  for (Eigen::Index j = 0; j < 4; ++j) EXPECT_NEAR(m.coefficients()(j), expected(j), 1e-9);
}

TEST(Linear, ConstantTarget) {
  const Xy d = LinearData(30, 2, 0.0);
  const LinearModel m = TrainLinear(d.x, Vector::Constant(30, 7.0));
  EXPECT_NEAR(m.intercept(), 7.0, 1e-10);
  EXPECT_LT(m.coefficients().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Linear, ResidualsOrthogonalToColumns) {
  const Xy d = LinearData(80, 3, 1.0);
  const LinearModel m = TrainLinear(d.x, d.y);
  const Vector r = d.y - m.predict(d.x);
  EXPECT_NEAR(r.sum(), 0.0, 1e-8);
  for (Eigen::Index j = 0; j < 4; ++j) EXPECT_NEAR(d.x.col(j).dot(r), 0.0, 1e-8);
}

TEST(Linear, RankDeficiencyAndTooFewRows) {
  Xy d = LinearData(30, 4, 0.1);
  d.x.col(2) = 2.0 * d.x.col(0);
  try {
    TrainLinear(d.x, d.y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumerical);
  }
  const Xy small = LinearData(5, 4, 0.1);
  EXPECT_THROW(TrainLinear(small.x, small.y), Error);
}

TEST(KernelRidge, InterpolatesWithTinyRidge) {
  const Xy d = LinearData(40, 5, 0.3);
  const auto m = TrainKernelRidge(d.x, d.y, 1.0, 1e-10);
  EXPECT_LT((m.predict(d.x) - d.y).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(KernelRidge, HugeRidgeShrinksToMean) {
  const Xy d = LinearData(40, 6, 0.3);
  const auto m = TrainKernelRidge(d.x, d.y, 1.0, 1e12);
  EXPECT_LT((m.predict(d.x).array() - d.y.mean()).abs().maxCoeff(), 1e-6);
}

TEST(KernelRidge, RowOrderDoesNotMatter) {
  const Xy d = LinearData(30, 7, 0.3);
  std::vector<Eigen::Index> perm(30);
  for (Eigen::Index i = 0; i < 30; ++i) perm[static_cast<std::size_t>(i)] = 29 - i;
  const auto a = TrainKernelRidge(d.x, d.y, 0.8, 1e-2);
  const auto b = TrainKernelRidge(d.x(perm, Eigen::all), d.y(perm), 0.8, 1e-2);
  const Xy probe = LinearData(10, 8, 0.0);
  EXPECT_LT((a.predict(probe.x) - b.predict(probe.x)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(BoostedTrees, ConstantTargetGivesConstantModel) {
  const Xy d = LinearData(40, 9, 0.0);
  const auto m = TrainBoostedTrees(d.x, Vector::Constant(40, -2.5));
  const Vector p = m.predict(LinearData(5, 10, 0.0).x);
  for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_EQ(p(i), -2.5);
}

TEST(BoostedTrees, LearnsStepFunction) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1, 1);
  Matrix x(1000, 3);
  Vector y(1000);
  for (Eigen::Index i = 0; i < 1000; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) x(i, j) = unif(rng);
    y(i) = x(i, 1) > 0.2 ? 3.0 : -1.0;
  }
  const auto m = TrainBoostedTrees(x, y);
  EXPECT_GE(RSquared(y, m.predict(x)), 0.99);
}

TEST(BoostedTrees, SingleSplitLeavesPerLeafVariance) {
  // 20 rows: x = 0 with y = 0..9 and x = 1 with y = 10..19. One depth-1 tree
  // at rate 1 splits at x = 0.5; each leaf keeps the variance of 0..9.
  Matrix x = Matrix::Zero(20, 3);
  Vector y(20);
  for (Eigen::Index i = 0; i < 20; ++i) {
    x(i, 0) = i < 10 ? 0.0 : 1.0;
    y(i) = static_cast<double>(i);
  }
  BoostedTreesConfig cfg;
  cfg.trees = 1;
  cfg.depth = 1;
  cfg.rate = 1.0;
  cfg.min_leaf = 1;
  const auto m = TrainBoostedTrees(x, y, cfg);
  ASSERT_EQ(m.training_mse().size(), 2u);
  EXPECT_NEAR(m.training_mse()[0], 33.25, 1e-12);
  EXPECT_NEAR(m.training_mse()[1], 8.25, 1e-12);
  ASSERT_EQ(m.trees().size(), 1u);
  EXPECT_EQ(m.trees()[0][0].feature, 0);
  EXPECT_DOUBLE_EQ(m.trees()[0][0].threshold, 0.5);
}

TEST(BoostedTrees, TrainingErrorDecreasesAndRunsAreDeterministic) {
  const Xy d = LinearData(200, 12, 0.5);
  BoostedTreesConfig cfg;
  cfg.subsample = 0.7;
  cfg.seed = 3;
  const auto a = TrainBoostedTrees(d.x, d.y, cfg);
  const auto b = TrainBoostedTrees(d.x, d.y, cfg);
  EXPECT_EQ(a.predict(d.x), b.predict(d.x));
  EXPECT_LT(a.training_mse().back(), 0.5 * a.training_mse().front());
  cfg.seed = 4;
  EXPECT_NE(TrainBoostedTrees(d.x, d.y, cfg).predict(d.x), a.predict(d.x));
}

TEST(BoostedTrees, RejectsTinyData) {
  const Xy d = LinearData(10, 1, 0.0);
  EXPECT_THROW(TrainBoostedTrees(d.x, d.y), Error);
}

TEST(ModelIo, RoundTripsAreBitExact) {
  const Xy d = LinearData(60, 13, 0.4);
  std::vector<std::shared_ptr<TrainedModel>> models = {
      std::make_shared<LinearModel>(TrainLinear(d.x, d.y)),
      std::make_shared<KernelRidgeModel>(TrainKernelRidge(d.x, d.y, 1.3, 1e-3)),
      std::make_shared<BoostedTreesModel>(TrainBoostedTrees(d.x, d.y)),
  };
  for (const auto& m : models) {
    const std::string text = SerializeModel(*m);
    const TrainedModelPtr back = DeserializeModel(text);
    EXPECT_EQ(back->kind(), m->kind());
    EXPECT_EQ(back->predict(d.x), m->predict(d.x));
    EXPECT_EQ(SerializeModel(*back), text);
  }
  testing::TempDir dir;
  SaveModel(*models[0], dir.file("m.json"));
  EXPECT_EQ(LoadModel(dir.file("m.json"))->predict(d.x), models[0]->predict(d.x));
}

TEST(ModelIo, RejectsCorruptArtifacts) {
  auto kind = [](const std::string& text) {
    try {
      DeserializeModel(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  EXPECT_EQ(kind("{not json"), ErrorKind::kModel);
  EXPECT_EQ(kind(R"({"format":"other"})"), ErrorKind::kModel);
  EXPECT_EQ(kind(R"({"format":"geoshap.model","version":99,"kind":"linear"})"), ErrorKind::kModel);
  EXPECT_THROW(LoadModel("/nonexistent/model.json"), Error);
}

TEST(ModelKindNames, ParseAndPrint) {
  for (ModelKind k : {ModelKind::kLinear, ModelKind::kKernelRidge, ModelKind::kBoostedTrees}) {
    EXPECT_EQ(ParseModelKind(ModelKindName(k)), k);
  }
  EXPECT_THROW(ParseModelKind("xgboost"), Error);
}

TEST(Metrics, RSquaredAndCrossValidation) {
  EXPECT_DOUBLE_EQ(RSquared((Vector(3) << 1, 2, 3).finished(), (Vector(3) << 1, 2, 4).finished()),
                   0.5);
  const Xy d = LinearData(100, 14, 0.1);
  const double r2 = CrossValidatedR2(LinearTrainer(), d.x, d.y, 5, 1);
  EXPECT_GT(r2, 0.99);
  EXPECT_EQ(r2, CrossValidatedR2(LinearTrainer(), d.x, d.y, 5, 1));
  EXPECT_THROW(CrossValidatedR2(LinearTrainer(), d.x, d.y, 1, 1), Error);
}

}  // namespace
}  // namespace geoshap

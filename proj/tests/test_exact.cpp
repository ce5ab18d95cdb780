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

#include <algorithm>
#include <numeric>
#include <random>

#include "geoshap/error.hpp"
#include "geoshap/exact.hpp"
#include "geoshap/value_function.hpp"
#include "test_util.hpp"

namespace geoshap {
namespace {

using testing::MakeOracle;

std::vector<double> RandomGame(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> game(std::size_t{1} << m);
  for (auto& v : game) v = normal(rng);
  return game;
}

TEST(ShapleyExact, LinearModelGivesCoefficientTimesOffset) {
  const auto f = MakeOracle(4, [](std::span<const double> x) { return 3 * x[0] + 2 * x[1]; });
  const Vector x = (Vector(4) << 1, 1, 0, 0).finished();
  const BackgroundSet bg(Matrix::Zero(1, 4));
  const auto a = ShapleyExact(*f, x, bg, PlayerIndex(2, false));
  EXPECT_NEAR(a.phi[0], 3.0, 1e-12);
  EXPECT_NEAR(a.phi[1], 2.0, 1e-12);
  EXPECT_EQ(a.phi0, 0.0);
}

TEST(ShapleyExact, ProductSplitsEvenly) {
  const auto f = MakeOracle(4, [](std::span<const double> x) { return x[0] * x[1]; });
  const Vector x = (Vector(4) << 1, 1, 0, 0).finished();
  const auto a = ShapleyExact(*f, x, BackgroundSet(Matrix::Zero(1, 4)), PlayerIndex(2, false));
  EXPECT_NEAR(a.phi[0], 0.5, 1e-12);
  EXPECT_NEAR(a.phi[1], 0.5, 1e-12);
}

TEST(ShapleyExact, HandEnumeratedThreePlayerGame) {
  // f = x1*x2 + x3 at (1,1,2), background rows (0,0,0) and (1,0,1).
  // v: {}=0.5 {1}=0.5 {2}=1 {3}=2 {1,2}=1.5 {1,3}=2 {2,3}=2.5 {1,2,3}=3
  // phi_1 = 0.5/6 + 0.5/3, phi_2 = 0.5/3 + 1/6 + 0.5/6 + 1/3, phi_3 = 1.5.
  const auto f = MakeOracle(5, [](std::span<const double> x) { return x[0] * x[1] + x[2]; });
  const Vector x = (Vector(5) << 1, 1, 2, 0, 0).finished();
  Matrix bg(2, 5);
  bg << 0, 0, 0, 0, 0, 1, 0, 1, 0, 0;
  const PlayerIndex players(3, false);
  const auto game = TabulateGame(*f, x, BackgroundSet(bg), players);
  EXPECT_EQ(game, (std::vector<double>{0.5, 0.5, 1, 1.5, 2, 2, 2.5, 3}));
  const auto a = ShapleyExact(*f, x, BackgroundSet(bg), players);
  EXPECT_NEAR(a.phi0, 0.5, 1e-15);
  EXPECT_NEAR(a.phi[0], 0.25, 1e-12);
  EXPECT_NEAR(a.phi[1], 0.75, 1e-12);
  EXPECT_NEAR(a.phi[2], 1.5, 1e-12);
  EXPECT_TRUE(VerifyEfficiency(a, 3.0, 1e-12));
}

TEST(ShapleyFromGame, GloveGame) {
  // Players 0 and 1 hold left gloves, player 2 a right glove.
  std::vector<double> game(8, 0.0);
  game[0b101] = game[0b110] = game[0b111] = 1.0;
  const auto a = ShapleyFromGame(game, 3);
  EXPECT_NEAR(a.phi[0], 1.0 / 6, 1e-15);
  EXPECT_NEAR(a.phi[1], 1.0 / 6, 1e-15);
  EXPECT_NEAR(a.phi[2], 2.0 / 3, 1e-15);
}

TEST(ShapleyFromGame, Dummy) {
  auto game = RandomGame(5, 1);
  // Player 2 never changes the value.
  for (std::uint64_t s = 0; s < game.size(); ++s) {
    if (s & 0b100) game[s] = game[s & ~std::uint64_t{0b100}];
  }
  const auto a = ShapleyFromGame(game, 5);
  EXPECT_NEAR(a.phi[2], 0.0, 1e-9);
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_NEAR(InteractionIndexFromGame(game, 5, 2, j == 2 ? 0 : j), 0.0, 1e-9);
  }
}

TEST(ShapleyFromGame, Symmetry) {
  auto game = RandomGame(4, 2);
  // Make players 1 and 3 interchangeable.
  for (std::uint64_t s = 0; s < game.size(); ++s) {
    const bool b1 = s & 0b0010, b3 = s & 0b1000;
    if (b1 && !b3) game[s] = game[(s & ~std::uint64_t{0b0010}) | 0b1000];
  }
  const auto a = ShapleyFromGame(game, 4);
  EXPECT_NEAR(a.phi[1], a.phi[3], 1e-9);
}

TEST(ShapleyFromGame, LinearityAndScaling) {
  const auto g1 = RandomGame(5, 3);
  const auto g2 = RandomGame(5, 4);
  std::vector<double> sum(g1.size()), scaled(g1.size());
  for (std::size_t s = 0; s < g1.size(); ++s) {
    sum[s] = 2.0 * g1[s] - 0.5 * g2[s];
    scaled[s] = 7.5 * g1[s];
  }
  const auto a1 = ShapleyFromGame(g1, 5);
  const auto a2 = ShapleyFromGame(g2, 5);
  const auto as = ShapleyFromGame(sum, 5);
  const auto ak = ShapleyFromGame(scaled, 5);
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_NEAR(as.phi[j], 2.0 * a1.phi[j] - 0.5 * a2.phi[j], 1e-9);
    EXPECT_NEAR(ak.phi[j], 7.5 * a1.phi[j], 1e-9);
  }
  auto rank = [](const std::vector<double>& v) {
    std::vector<std::size_t> r(v.size());
    std::iota(r.begin(), r.end(), 0);
    std::sort(r.begin(), r.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    return r;
  };
  EXPECT_EQ(rank(a1.phi), rank(ak.phi));
}

TEST(InteractionIndex, PureProductOfTwoPlayers) {
  EXPECT_NEAR(InteractionIndexFromGame(std::vector<double>{0, 0, 0, 1}, 2, 0, 1), 1.0, 1e-15);
  EXPECT_NEAR(InteractionIndexFromGame(std::vector<double>{0, 1, 2, 3}, 2, 0, 1), 0.0, 1e-15);
}

TEST(GeoShapley, PureLocationInteractionIsForced) {
  // f(x1, u, v) = u * x1 with instance 1 and background 0.
  const auto c = GeoShapleyFromGame(std::vector<double>{0, 0, 0, 1}, 2);
  EXPECT_NEAR(c.phi_geo, 0.0, 1e-15);
  EXPECT_NEAR(c.phi[0], 0.0, 1e-15);
  EXPECT_NEAR(c.phi_geo_x[0], 1.0, 1e-15);
}

TEST(GeoShapley, HandComputedThreePlayerGame) {
  // f = x1*x2 + u*x1, instance 1, background 0. Players x1, x2, GEO.
  // v: {1,2}=1, {1,G}=1, {1,2,G}=2, every other coalition 0.
  // Shapley: x1 = 1, x2 = 1/2, GEO = 1/2. I(GEO,x1) = 1, I(GEO,x2) = 0.
  const auto f = MakeOracle(4, [](std::span<const double> x) { return x[0] * x[1] + x[2] * x[0]; });
  const Vector x = (Vector(4) << 1, 1, 1, 1).finished();
  const BackgroundSet bg(Matrix::Zero(1, 4));
  const auto c = GeoShapleyEnumerated(*f, x, bg, PlayerIndex(2, true));
  EXPECT_NEAR(c.phi0, 0.0, 1e-15);
  EXPECT_NEAR(c.phi_geo, 0.0, 1e-12);
  EXPECT_NEAR(c.phi[0], 0.5, 1e-12);
  EXPECT_NEAR(c.phi[1], 0.5, 1e-12);
  EXPECT_NEAR(c.phi_geo_x[0], 1.0, 1e-12);
  EXPECT_NEAR(c.phi_geo_x[1], 0.0, 1e-12);
  EXPECT_EQ(c.prediction, 2.0);
}

TEST(GeoShapley, CoordinateFreeModelHasNoLocationComponents) {
  const auto f = MakeOracle(5, [](std::span<const double> x) {
    return x[0] * x[1] + std::sin(x[2]) * x[0];
  });
  const DataSet d = testing::RandomData(30, 3, 8);
  const BackgroundSet bg = BackgroundSet::Sample(d, 12, 1);
  const PlayerIndex players(3, true);
  for (std::size_t i = 0; i < 5; ++i) {
    const Vector x = d.model_row(i);
    const auto c = GeoShapleyEnumerated(*f, x, bg, players);
    EXPECT_NEAR(c.phi_geo, 0.0, 1e-12);
    for (double v : c.phi_geo_x) EXPECT_NEAR(v, 0.0, 1e-12);
    const auto plain = ShapleyExact(*f, x, bg, PlayerIndex(3, false));
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(c.phi[j], plain.phi[j], 1e-12);
    EXPECT_TRUE(VerifyEfficiency(c, 1e-10));
  }
}

TEST(GeoShapley, EfficiencyOnRandomGames) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto game = RandomGame(6, seed);
    const auto c = GeoShapleyFromGame(game, 6);
    EXPECT_NEAR(c.sum(), game.back(), 1e-10);
    EXPECT_EQ(c.phi0, game.front());
  }
}

TEST(VerifyEfficiency, DetectsPerturbation) {
  const auto c = GeoShapleyFromGame(RandomGame(4, 11), 4);
  EXPECT_TRUE(VerifyEfficiency(c, 1e-9));
  GeoComponents bad = c;
  bad.phi[1] += 1e-3;
  EXPECT_FALSE(VerifyEfficiency(bad, 1e-6));
}

TEST(ShapleyExact, LinearAnalyticAgainstBackgroundMean) {
  const Vector beta = (Vector(6) << 1.5, -2.0, 0.25, 4.0, 0.5, -1.0).finished();
  const auto f = MakeOracle(6, [&](std::span<const double> x) {
    double s = 0.7;
    for (std::size_t j = 0; j < 6; ++j) s += beta(static_cast<Eigen::Index>(j)) * x[j];
    return s;
  });
  const DataSet d = testing::RandomData(40, 4, 5);
  const BackgroundSet bg = BackgroundSet::Sample(d, 25, 3);
  const Vector mean = bg.column_means();
  for (std::size_t i = 0; i < 4; ++i) {
    const Vector x = d.model_row(i);
    const auto a = ShapleyExact(*f, x, bg, PlayerIndex(4, true));
    for (Eigen::Index j = 0; j < 4; ++j) {
      EXPECT_NEAR(a.phi[static_cast<std::size_t>(j)], beta(j) * (x(j) - mean(j)), 1e-10);
    }
  }
}

TEST(ShapleyExact, RefusesTooManyPlayers) {
  const auto f = MakeOracle(23, [](std::span<const double>) { return 0.0; });
  try {
    ShapleyExact(*f, Vector::Zero(23), BackgroundSet(Matrix::Zero(1, 23)), PlayerIndex(21, false));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBudget);
  }
  EXPECT_THROW(GeoShapleyEnumerated(*f, Vector::Zero(23), BackgroundSet(Matrix::Zero(1, 23)),
                                    PlayerIndex(21, false)),
               Error);
}

}  // namespace
}  // namespace geoshap

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

#include "geoshap/synthetic.hpp"

#include <cmath>
#include <random>

#include "geoshap/error.hpp"

namespace geoshap {

namespace {

struct Draws {
  Matrix coords;
  Matrix normals;
  Vector noise;
};

// Column-wise draws: u, v, then each normal column, then noise.
Draws Draw(std::size_t n, std::size_t normal_columns, std::uint64_t seed,
           double noise_sd) {
  if (n < 100) Fail(ErrorKind::kInvalidArgument, "generators need n >= 100");
  if (!(noise_sd >= 0.0)) Fail(ErrorKind::kInvalidArgument, "noise_sd must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto rows = static_cast<Eigen::Index>(n);
  Draws d{Matrix(rows, 2), Matrix(rows, static_cast<Eigen::Index>(normal_columns)),
          Vector(rows)};
  for (Eigen::Index c = 0; c < 2; ++c) {
    for (Eigen::Index i = 0; i < rows; ++i) d.coords(i, c) = uniform(rng);
  }
  for (Eigen::Index c = 0; c < d.normals.cols(); ++c) {
    for (Eigen::Index i = 0; i < rows; ++i) d.normals(i, c) = normal(rng);
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    d.noise(i) = noise_sd > 0.0 ? noise_sd * normal(rng) : 0.0;
  }
  return d;
}

}  // namespace

double SCurve(double x) { return 2.0 * std::tanh(1.5 * x); }

SyntheticTruth GenerateSvc(std::size_t n, std::uint64_t seed, double noise_sd,
                           std::size_t null_features) {
  const std::size_t p = 2 + null_features;
  Draws d = Draw(n, p, seed, noise_sd);
  const auto rows = static_cast<Eigen::Index>(n);
  Vector beta0(rows);
  Matrix betas = Matrix::Zero(rows, static_cast<Eigen::Index>(p));
  Vector signal(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double u = d.coords(i, 0);
    const double v = d.coords(i, 1);
    beta0(i) = 3.0 * (u + v);
    betas(i, 0) = 1.0 + 2.0 * u;
    betas(i, 1) = 2.0;
    signal(i) = beta0(i) + betas(i, 0) * d.normals(i, 0) + betas(i, 1) * d.normals(i, 1);
  }
  std::vector<std::string> names = {"x1", "x2"};
  for (std::size_t k = 0; k < null_features; ++k) names.push_back("z" + std::to_string(k + 1));
  Vector target = signal + d.noise;
  SyntheticTruth truth{DataSet(std::move(names), d.normals, d.coords, std::move(target)),
                       std::move(beta0), std::move(betas), std::move(signal), noise_sd,
                       seed};
  return truth;
}

SyntheticTruth GenerateNonlinear(std::size_t n, std::uint64_t seed, double noise_sd) {
  Draws d = Draw(n, 2, seed, noise_sd);
  const auto rows = static_cast<Eigen::Index>(n);
  Vector signal(rows);
  for (Eigen::Index i = 0; i < rows; ++i) signal(i) = SCurve(d.normals(i, 0));
  Vector target = signal + d.noise;
  return SyntheticTruth{DataSet({"x1", "x2"}, d.normals, d.coords, std::move(target)),
                        Vector::Zero(rows), Matrix::Zero(rows, 2), std::move(signal),
                        noise_sd, seed};
}

}  // namespace geoshap

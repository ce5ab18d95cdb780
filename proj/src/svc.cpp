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
#include <limits>
#include <map>
#include <numeric>

#include "geoshap/analysis.hpp"
#include "geoshap/error.hpp"

namespace geoshap {

const char* SpatialKernelName(SpatialKernel kernel) {
  switch (kernel) {
    case SpatialKernel::kBisquare: return "bisquare";
    case SpatialKernel::kUniform: return "uniform";
    case SpatialKernel::kGaussian: return "gaussian";
  }
  return "unknown";
}

SpatialKernel ParseSpatialKernel(const std::string& name) {
  if (name == "bisquare") return SpatialKernel::kBisquare;
  if (name == "uniform") return SpatialKernel::kUniform;
  if (name == "gaussian") return SpatialKernel::kGaussian;
  Fail(ErrorKind::kInvalidArgument,
       "unknown kernel '" + name + "' (bisquare, uniform, gaussian)");
}

namespace {

bool IsAdaptive(SpatialKernel kernel) { return kernel != SpatialKernel::kGaussian; }

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

// Weighted simple regression, skipping neighbor `skip` (use n to skip none).
// Returns false when the weighted x spread vanishes.
bool FitLine(std::span<const std::uint32_t> order, std::span<const double> w,
             std::span<const double> x, std::span<const double> g,
             std::uint32_t skip, LineFit& fit) {
  double sw = 0.0, swx = 0.0, swg = 0.0, swxx = 0.0;
  for (std::size_t t = 0; t < w.size(); ++t) {
    const std::uint32_t k = order[t];
    if (k == skip || w[t] <= 0.0) continue;
    sw += w[t];
    swx += w[t] * x[k];
    swg += w[t] * g[k];
    swxx += w[t] * x[k] * x[k];
  }
  if (!(sw > 0.0)) return false;
  const double xm = swx / sw;
  const double gm = swg / sw;
  double sxx = 0.0, sxg = 0.0;
  for (std::size_t t = 0; t < w.size(); ++t) {
    const std::uint32_t k = order[t];
    if (k == skip || w[t] <= 0.0) continue;
    const double dx = x[k] - xm;
    sxx += w[t] * dx * dx;
    sxg += w[t] * dx * (g[k] - gm);
  }
  if (!(sxx > 1e-12 * swxx)) return false;
  fit.slope = sxg / sxx;
  fit.intercept = gm - fit.slope * xm;
  return true;
}

}  // namespace

LocalRegression::LocalRegression(const Matrix& coords, SpatialKernel kernel)
    : n_(static_cast<std::size_t>(coords.rows())), kernel_(kernel) {
  if (coords.cols() != 2 || n_ == 0) {
    Fail(ErrorKind::kInvalidArgument, "local regression needs n x 2 coordinates");
  }
  order_.resize(n_);
  distance_.resize(n_);
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < n_; ++k) {
      d[k] = (coords.row(static_cast<Eigen::Index>(i)) -
              coords.row(static_cast<Eigen::Index>(k)))
                 .norm();
    }
    auto& order = order_[i];
    order.resize(n_);
    std::iota(order.begin(), order.end(), 0u);
    // Ties by index; self (distance 0) comes first among exact duplicates of
    // lower index only, which is irrelevant to the weights.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return d[a] < d[b]; });
    distance_[i].resize(n_);
    for (std::size_t t = 0; t < n_; ++t) distance_[i][t] = d[order[t]];
  }
}

double LocalRegression::min_bandwidth() const {
  if (IsAdaptive(kernel_)) return static_cast<double>(kMinNeighbors);
  double total = 0.0;
  const std::size_t t = std::min(kMinNeighbors, n_) - 1;
  for (std::size_t i = 0; i < n_; ++i) total += distance_[i][t];
  return total / static_cast<double>(n_);
}

double LocalRegression::max_bandwidth() const {
  if (IsAdaptive(kernel_)) return static_cast<double>(n_);
  double out = 0.0;
  for (std::size_t i = 0; i < n_; ++i) out = std::max(out, distance_[i].back());
  return out;
}

void LocalRegression::Weights(std::size_t i, double bandwidth,
                              std::vector<double>& w) const {
  const auto& dist = distance_[i];
  switch (kernel_) {
    case SpatialKernel::kBisquare: {
      const auto k = static_cast<std::size_t>(std::llround(bandwidth));
      const double b = dist[k - 1];
      w.assign(k, 0.0);
      for (std::size_t t = 0; t < k; ++t) {
        if (b == 0.0) {
          w[t] = dist[t] == 0.0 ? 1.0 : 0.0;
        } else if (dist[t] < b) {
          const double r = dist[t] / b;
          w[t] = (1.0 - r * r) * (1.0 - r * r);
        }
      }
      break;
    }
    case SpatialKernel::kUniform: {
      const auto k = static_cast<std::size_t>(std::llround(bandwidth));
      w.assign(k, 1.0);
      break;
    }
    case SpatialKernel::kGaussian: {
      w.resize(n_);
      for (std::size_t t = 0; t < n_; ++t) {
        const double r = dist[t] / bandwidth;
        w[t] = std::exp(-0.5 * r * r);
      }
      break;
    }
  }
}

namespace {

void CheckBandwidth(SpatialKernel kernel, double bandwidth, std::size_t n) {
  if (IsAdaptive(kernel)) {
    const auto k = std::llround(bandwidth);
    if (k < static_cast<long long>(kMinNeighbors)) {
      Fail(ErrorKind::kInvalidArgument,
           "bandwidth of " + std::to_string(k) + " neighbors is below the minimum of " +
               std::to_string(kMinNeighbors));
    }
    if (k > static_cast<long long>(n)) {
      Fail(ErrorKind::kInvalidArgument, "bandwidth of " + std::to_string(k) +
                                            " neighbors exceeds the " +
                                            std::to_string(n) + " locations");
    }
  } else if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    Fail(ErrorKind::kInvalidArgument, "gaussian bandwidth must be a positive distance");
  }
}

void CheckInputs(std::span<const double> x, std::span<const double> g, std::size_t n) {
  if (x.size() != n || g.size() != n) {
    Fail(ErrorKind::kInvalidArgument, "local regression inputs do not match locations");
  }
}

}  // namespace

void LocalRegression::Fit(std::span<const double> x, std::span<const double> g,
                          double bandwidth, std::vector<double>& beta,
                          std::vector<double>& intercept) const {
  CheckInputs(x, g, n_);
  CheckBandwidth(kernel_, bandwidth, n_);
  beta.assign(n_, 0.0);
  intercept.assign(n_, 0.0);
  std::vector<double> w;
  for (std::size_t i = 0; i < n_; ++i) {
    Weights(i, bandwidth, w);
    LineFit fit;
    if (!FitLine(order_[i], w, x, g, static_cast<std::uint32_t>(n_), fit)) {
      Fail(ErrorKind::kNumerical,
           "local regression at location " + std::to_string(i) +
               " is degenerate (no spread in the feature); use a larger bandwidth");
    }
    beta[i] = fit.slope;
    intercept[i] = fit.intercept;
  }
}

double LocalRegression::CrossValidation(std::span<const double> x,
                                        std::span<const double> g,
                                        double bandwidth) const {
  CheckInputs(x, g, n_);
  CheckBandwidth(kernel_, bandwidth, n_);
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    Weights(i, bandwidth, w);
    LineFit fit;
    if (!FitLine(order_[i], w, x, g, static_cast<std::uint32_t>(i), fit)) {
      return std::numeric_limits<double>::infinity();
    }
    const double r = g[i] - (fit.intercept + fit.slope * x[i]);
    total += r * r;
  }
  return total;
}

double SelectBandwidth(const Matrix& coords, std::span<const double> x,
                       std::span<const double> g, SpatialKernel kernel) {
  const auto n = static_cast<std::size_t>(coords.rows());
  if (n < kMinBandwidthSelectionRows) {
    Fail(ErrorKind::kInvalidArgument,
         "bandwidth selection needs at least " +
             std::to_string(kMinBandwidthSelectionRows) + " locations, got " +
             std::to_string(n));
  }
  const LocalRegression local(coords, kernel);
  double scale = 0.0;
  for (double value : g) scale += value * value;
  std::map<double, double> cache;
  auto score = [&](double b) {
    auto it = cache.find(b);
    if (it != cache.end()) return it->second;
    const double s = local.CrossValidation(x, g, b);
    cache.emplace(b, s);
    return s;
  };
  // a strictly better than b.
  auto better = [&](double a, double b) {
    if (std::isinf(a)) return false;
    if (std::isinf(b)) return true;
    return a < b - (1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-12 * scale);
  };
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = local.min_bandwidth();
  double hi = local.max_bandwidth();
  const bool integer = kernel != SpatialKernel::kGaussian;

  if (integer) {
    while (hi - lo > 3) {
      double c = std::round(hi - kInvPhi * (hi - lo));
      double d = std::round(lo + kInvPhi * (hi - lo));
      if (c <= lo) c = lo + 1;
      if (d >= hi) d = hi - 1;
      if (d <= c) d = c + 1;
      if (better(score(c), score(d))) {
        hi = d;
      } else {
        lo = c;
      }
    }
    for (double b = lo; b <= hi; b += 1.0) score(b);
  } else {
    for (int iter = 0; iter < 80 && hi - lo > 1e-6 * hi; ++iter) {
      const double c = hi - kInvPhi * (hi - lo);
      const double d = lo + kInvPhi * (hi - lo);
      if (better(score(c), score(d))) {
        hi = d;
      } else {
        lo = c;
      }
    }
    score(hi);
  }
  // Best evaluated candidate; scanning from the largest bandwidth down keeps
  // the smoothest one on ties.
  double best = cache.rbegin()->first;
  for (auto it = cache.rbegin(); it != cache.rend(); ++it) {
    if (better(it->second, cache.at(best))) best = it->first;
  }
  if (std::isinf(cache.at(best))) {
    Fail(ErrorKind::kNumerical, "every candidate bandwidth gives degenerate local fits");
  }
  return best;
}

SvcSurface SvcExtract(const ExplanationSet& explanations, const DataSet& data,
                      const std::string& feature, const SvcOptions& options) {
  if (explanations.rows.size() != data.n_rows()) {
    Fail(ErrorKind::kInvalidArgument, "explanations and data have different row counts");
  }
  const auto it = std::find(explanations.feature_names.begin(),
                            explanations.feature_names.end(), feature);
  if (it == explanations.feature_names.end()) {
    Fail(ErrorKind::kInvalidArgument, "unknown feature '" + feature + "'");
  }
  const auto j = static_cast<std::size_t>(it - explanations.feature_names.begin());
  const auto column = static_cast<Eigen::Index>(data.feature_index(feature));
  const std::size_t n = data.n_rows();
  std::vector<double> x(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = data.features()(static_cast<Eigen::Index>(i), column);
    g[i] = explanations.rows[i].components.combined(j);
  }
  const auto [min_x, max_x] = std::minmax_element(x.begin(), x.end());
  if (*min_x == *max_x) {
    Fail(ErrorKind::kData, "feature '" + feature + "' is constant; no local slope exists");
  }
  SvcSurface surface;
  surface.feature = feature;
  surface.kernel = options.kernel;
  surface.bandwidth = options.bandwidth
                          ? *options.bandwidth
                          : SelectBandwidth(data.coords(), x, g, options.kernel);
  const LocalRegression local(data.coords(), options.kernel);
  local.Fit(x, g, surface.bandwidth, surface.beta, surface.intercept);
  surface.masked.assign(n, false);
  return surface;
}

}  // namespace geoshap

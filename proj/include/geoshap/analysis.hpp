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

// Summaries built on top of explanations: global importance, primary-effect
// dependence points, spatially varying coefficients and bootstrap intervals.

#ifndef GEOSHAP_ANALYSIS_HPP_
#define GEOSHAP_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoshap/dataset.hpp"
#include "geoshap/explanation.hpp"
#include "geoshap/kernel.hpp"
#include "geoshap/oracle.hpp"

namespace geoshap {

// ---------------------------------------------------------------------------
// Global importance.

inline constexpr const char* kGeoName = "GEO";

struct ImportanceRow {
  std::string name;
  bool is_geo = false;
  double primary = 0.0;  // mean |phi_j|, or mean |phi_geo| for the GEO row
  double geo = 0.0;      // mean |phi_geo_x_j|; zero for the GEO row
  double total = 0.0;    // primary + geo
};

// Sorted by total, descending; ties broken by name.
struct ImportanceTable {
  std::vector<ImportanceRow> rows;
  const ImportanceRow& at(const std::string& name) const;
};

ImportanceTable GlobalImportance(const ExplanationSet& explanations);

// ---------------------------------------------------------------------------
// Primary-effect dependence: one (x_j, phi_j) point per observation, sorted
// by x_j (stable in row order).

struct DependencePoint {
  double x = 0.0;
  double phi = 0.0;
  std::size_t row = 0;
};

std::vector<DependencePoint> PdpPoints(const ExplanationSet& explanations,
                                       const DataSet& data,
                                       const std::string& feature);

// ---------------------------------------------------------------------------
// Spatially varying coefficients: at every location a kernel-weighted local
// regression of g = phi_j + phi_geo_x_j on x_j with intercept.

enum class SpatialKernel {
  kBisquare,  // adaptive: (1 - (d/b)^2)^2 inside the k-th neighbor distance
  kUniform,   // adaptive: weight 1 for the k nearest locations
  kGaussian,  // fixed distance bandwidth: exp(-(d/b)^2 / 2)
};

const char* SpatialKernelName(SpatialKernel kernel);
SpatialKernel ParseSpatialKernel(const std::string& name);

inline constexpr std::size_t kMinNeighbors = 10;
inline constexpr std::size_t kMinBandwidthSelectionRows = 30;

struct SvcOptions {
  SpatialKernel kernel = SpatialKernel::kBisquare;
  // Neighbor count for adaptive kernels, distance for kGaussian. Unset
  // selects by leave-one-out cross-validation.
  std::optional<double> bandwidth;
};

struct SvcSurface {
  std::string feature;
  SpatialKernel kernel = SpatialKernel::kBisquare;
  double bandwidth = 0.0;
  std::vector<double> beta;       // local slope per location
  std::vector<double> intercept;  // local intercept per location
  std::vector<bool> masked;       // set by MaskSurface
  std::vector<double> lower;      // CI bounds, empty until MaskSurface
  std::vector<double> upper;
};

// Local regressions of g on x at the given locations. Shared by extraction
// and bootstrap replicates.
class LocalRegression {
 public:
  LocalRegression(const Matrix& coords, SpatialKernel kernel);

  std::size_t size() const { return n_; }
  SpatialKernel kernel() const { return kernel_; }

  // Slopes and intercepts for a bandwidth; throws kNumerical naming the
  // location when a local fit is degenerate.
  void Fit(std::span<const double> x, std::span<const double> g,
           double bandwidth, std::vector<double>& beta,
           std::vector<double>& intercept) const;

  // Leave-one-out squared error; +inf when any held-out fit is degenerate.
  double CrossValidation(std::span<const double> x, std::span<const double> g,
                         double bandwidth) const;

  // Search interval for bandwidth selection.
  double min_bandwidth() const;
  double max_bandwidth() const;

 private:
  // Weights of location i's neighbors (in neighbor order) for a bandwidth.
  void Weights(std::size_t i, double bandwidth, std::vector<double>& w) const;

  std::size_t n_;
  SpatialKernel kernel_;
  std::vector<std::vector<std::uint32_t>> order_;  // neighbors by distance
  std::vector<std::vector<double>> distance_;      // matching distances
};

// Golden-section search over the bandwidth minimizing leave-one-out error;
// integer neighbor counts in [10, n] for adaptive kernels. Scores within a
// relative 1e-9 count as ties and resolve to the larger (smoother)
// bandwidth, so a flat profile returns the largest candidate. Requires
// n >= 30.
double SelectBandwidth(const Matrix& coords, std::span<const double> x,
                       std::span<const double> g, SpatialKernel kernel);

// Combined-effect coefficients for one feature.
SvcSurface SvcExtract(const ExplanationSet& explanations, const DataSet& data,
                      const std::string& feature, const SvcOptions& options = {});

// ---------------------------------------------------------------------------
// Bootstrap.

struct BootstrapConfig {
  std::size_t replicates = 500;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  // Also re-estimate local coefficients per replicate at the bandwidth
  // selected on the full data.
  bool svc = true;
  SvcOptions svc_options;
  double max_failure_fraction = 0.1;
};

// Per (row, component) percentile intervals. Components are, in order:
// "GEO" (with a location player), each feature name, "GEO x <feature>" (with
// a location player), and with svc enabled "beta:<feature>".
struct BootstrapSummary {
  std::vector<std::string> row_ids;
  std::vector<std::string> components;
  Matrix point;  // n x C, estimates from the model fitted to the full data
  Matrix lower;  // 2.5th percentile
  Matrix upper;  // 97.5th percentile
  std::size_t replicates = 0;
  std::size_t failed = 0;
  std::vector<double> svc_bandwidths;  // per feature, when svc is enabled

  std::size_t component_index(const std::string& name) const;
};

// Resamples rows with replacement, refits, and re-explains the ORIGINAL rows
// against the same background. Replicate r draws from a generator seeded by
// (seed, r), so results do not depend on the thread count.
BootstrapSummary Bootstrap(const DataSet& data, const Trainer& trainer,
                           const BackgroundSet& background,
                           const ExplainConfig& explain,
                           const BootstrapConfig& config);

// Linear-interpolation quantile of already sorted values.
double SortedQuantile(std::span<const double> sorted, double q);

// ---------------------------------------------------------------------------
// Masking: an estimate is masked when its 95% interval contains zero
// (lower <= 0 <= upper). Values are never changed.

bool IntervalContainsZero(double lower, double upper);

struct MaskedValues {
  std::vector<double> values;
  std::vector<bool> masked;
};

MaskedValues MaskByCi(std::span<const double> values,
                      const BootstrapSummary& summary,
                      const std::string& component);

// Attaches "beta:<feature>" intervals and flags to a surface.
void MaskSurface(SvcSurface& surface, const BootstrapSummary& summary);

}  // namespace geoshap

#endif  // GEOSHAP_ANALYSIS_HPP_

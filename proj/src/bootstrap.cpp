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
#include <random>

#include "geoshap/analysis.hpp"
#include "geoshap/error.hpp"
#include "geoshap/parallel.hpp"

namespace geoshap {

std::size_t BootstrapSummary::component_index(const std::string& name) const {
  const auto it = std::find(components.begin(), components.end(), name);
  if (it == components.end()) {
    Fail(ErrorKind::kInvalidArgument, "bootstrap summary has no component '" + name + "'");
  }
  return static_cast<std::size_t>(it - components.begin());
}

double SortedQuantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) Fail(ErrorKind::kInvalidArgument, "quantile of an empty sample");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(h));
  const std::size_t above = std::min(below + 1, sorted.size() - 1);
  return sorted[below] + (h - static_cast<double>(below)) * (sorted[above] - sorted[below]);
}

namespace {

std::vector<std::string> ComponentNames(const ExplanationSet& e, bool svc) {
  std::vector<std::string> names;
  if (e.include_geo) names.push_back(kGeoName);
  for (const auto& f : e.feature_names) names.push_back(f);
  if (e.include_geo) {
    for (const auto& f : e.feature_names) names.push_back(std::string(kGeoName) + " x " + f);
  }
  if (svc) {
    for (const auto& f : e.feature_names) names.push_back("beta:" + f);
  }
  return names;
}

struct SvcPlan {
  std::vector<double> bandwidth;  // per feature
  std::vector<std::vector<double>> x;
};

// One row of the n x C component matrix for an explanation set, plus local
// slopes when a plan is given.
Matrix ComponentMatrix(const ExplanationSet& e, std::size_t columns,
                       const LocalRegression* local, const SvcPlan* plan) {
  const std::size_t n = e.rows.size();
  const std::size_t p = e.n_features();
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(columns));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = e.rows[i].components;
    auto r = static_cast<Eigen::Index>(i);
    Eigen::Index col = 0;
    if (e.include_geo) out(r, col++) = c.phi_geo;
    for (std::size_t j = 0; j < p; ++j) out(r, col++) = c.phi[j];
    if (e.include_geo) {
      for (std::size_t j = 0; j < p; ++j) out(r, col++) = c.phi_geo_x[j];
    }
  }
  if (local != nullptr) {
    const auto first = static_cast<Eigen::Index>(columns - p);
    std::vector<double> g(n), beta, intercept;
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < n; ++i) g[i] = e.rows[i].components.combined(j);
      local->Fit(plan->x[j], g, plan->bandwidth[j], beta, intercept);
      for (std::size_t i = 0; i < n; ++i) {
        out(static_cast<Eigen::Index>(i), first + static_cast<Eigen::Index>(j)) = beta[i];
      }
    }
  }
  return out;
}

}  // namespace

BootstrapSummary Bootstrap(const DataSet& data, const Trainer& trainer,
                           const BackgroundSet& background,
                           const ExplainConfig& explain,
                           const BootstrapConfig& config) {
  if (config.replicates == 0) {
    Fail(ErrorKind::kInvalidArgument, "bootstrap needs at least one replicate");
  }
  if (!data.target()) Fail(ErrorKind::kData, "bootstrap needs a target column");
  const std::size_t n = data.n_rows();
  const std::size_t p = data.n_features();
  const Matrix rows = data.model_matrix();
  const Vector& targets = *data.target();

  // Point estimates from the full data.
  const OraclePtr full_model = trainer.fit(rows, targets);
  ExplainConfig inner = explain;
  inner.threads = 1;
  ExplanationSet full = Explain(data, *full_model, background, explain);

  std::optional<LocalRegression> local;
  SvcPlan plan;
  if (config.svc) {
    local.emplace(data.coords(), config.svc_options.kernel);
    for (std::size_t j = 0; j < p; ++j) {
      const SvcSurface s = SvcExtract(full, data, data.feature_names()[j], config.svc_options);
      plan.bandwidth.push_back(s.bandwidth);
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = data.features()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      plan.x.push_back(std::move(x));
    }
  }

  BootstrapSummary summary;
  summary.row_ids = data.row_ids();
  summary.components = ComponentNames(full, config.svc);
  const std::size_t columns = summary.components.size();
  summary.point = ComponentMatrix(full, columns, local ? &*local : nullptr, &plan);
  summary.svc_bandwidths = plan.bandwidth;

  const std::size_t B = config.replicates;
  std::vector<Matrix> replicate(B);
  std::vector<char> ok(B, 0);
  ParallelFor(B, config.threads, [&](std::size_t r) {
    try {
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                        static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(r),
                        static_cast<std::uint32_t>(r >> 32)};
      std::mt19937_64 rng(seq);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      std::vector<Eigen::Index> idx(n);
      for (auto& i : idx) i = static_cast<Eigen::Index>(pick(rng));
      const OraclePtr model = trainer.fit(rows(idx, Eigen::all), targets(idx));
      const ExplanationSet e = Explain(data, *model, background, inner);
      replicate[r] = ComponentMatrix(e, columns, local ? &*local : nullptr, &plan);
      ok[r] = 1;
    } catch (const std::exception&) {
      ok[r] = 0;
    }
  });

  std::vector<std::size_t> good;
  for (std::size_t r = 0; r < B; ++r) {
    if (ok[r]) good.push_back(r);
  }
  summary.replicates = good.size();
  summary.failed = B - good.size();
  if (static_cast<double>(summary.failed) >
          config.max_failure_fraction * static_cast<double>(B) ||
      good.empty()) {
    Fail(ErrorKind::kModel, std::to_string(summary.failed) + " of " + std::to_string(B) +
                                " bootstrap replicates failed");
  }

  summary.lower.resize(summary.point.rows(), summary.point.cols());
  summary.upper.resize(summary.point.rows(), summary.point.cols());
  std::vector<double> sample(good.size());
  for (Eigen::Index i = 0; i < summary.point.rows(); ++i) {
    for (Eigen::Index c = 0; c < summary.point.cols(); ++c) {
      for (std::size_t k = 0; k < good.size(); ++k) sample[k] = replicate[good[k]](i, c);
      std::sort(sample.begin(), sample.end());
      summary.lower(i, c) = SortedQuantile(sample, 0.025);
      summary.upper(i, c) = SortedQuantile(sample, 0.975);
    }
  }
  return summary;
}

bool IntervalContainsZero(double lower, double upper) {
  return lower <= 0.0 && 0.0 <= upper;
}

MaskedValues MaskByCi(std::span<const double> values, const BootstrapSummary& summary,
                      const std::string& component) {
  if (values.size() != static_cast<std::size_t>(summary.point.rows())) {
    Fail(ErrorKind::kInvalidArgument, "values do not align with the bootstrap summary rows");
  }
  const auto c = static_cast<Eigen::Index>(summary.component_index(component));
  MaskedValues out;
  out.values.assign(values.begin(), values.end());
  out.masked.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out.masked[i] = IntervalContainsZero(summary.lower(r, c), summary.upper(r, c));
  }
  return out;
}

void MaskSurface(SvcSurface& surface, const BootstrapSummary& summary) {
  const MaskedValues masked = MaskByCi(surface.beta, summary, "beta:" + surface.feature);
  const auto c = static_cast<Eigen::Index>(summary.component_index("beta:" + surface.feature));
  surface.masked = masked.masked;
  surface.lower.resize(surface.beta.size());
  surface.upper.resize(surface.beta.size());
  for (std::size_t i = 0; i < surface.beta.size(); ++i) {
    surface.lower[i] = summary.lower(static_cast<Eigen::Index>(i), c);
    surface.upper[i] = summary.upper(static_cast<Eigen::Index>(i), c);
  }
}

}  // namespace geoshap

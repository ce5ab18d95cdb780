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

// File formats: CSV in; explanation JSON, importance/PDP CSV, SVC GeoJSON and
// bootstrap JSON out. All numbers are written in shortest round-trip form.
// Every artifact carries the hash of the run manifest that produced it.

#ifndef GEOSHAP_IO_HPP_
#define GEOSHAP_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoshap/analysis.hpp"
#include "geoshap/dataset.hpp"
#include "geoshap/explanation.hpp"
#include "geoshap/synthetic.hpp"

namespace geoshap {

struct CsvSelection {
  std::string x_column = "u";
  std::string y_column = "v";
  std::optional<std::string> target;
  std::optional<std::string> id_column;
  // Empty: every remaining column is a feature.
  std::vector<std::string> include;
  std::vector<std::string> exclude;
};

struct IngestReport {
  std::size_t rows_read = 0;
  // Rows dropped for a missing (empty, NA, NaN, null) selected value.
  std::vector<std::string> dropped_row_ids;
};

// Header row required; lines starting with '#' are skipped. Non-numeric
// selected cells are errors naming the row and column.
DataSet ReadCsv(std::istream& in, const CsvSelection& selection,
                IngestReport* report = nullptr);
DataSet IngestCsv(const std::filesystem::path& path, const CsvSelection& selection,
                  IngestReport* report = nullptr);

std::string FormatDouble(double value);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

// Writes text to path, replacing it; throws kIo on failure.
void WriteFile(const std::filesystem::path& path, std::string_view text);
std::string ReadFile(const std::filesystem::path& path);

// Simulation CSV (row_id, features..., u, v, y) and its truth sidecar
// (row_id, beta0, beta_<feature>..., signal).
std::string SimulationCsv(const SyntheticTruth& truth, const std::string& manifest_hash);
std::string TruthCsv(const SyntheticTruth& truth, const std::string& manifest_hash);

std::string ExplanationJson(const ExplanationSet& explanations,
                            const std::string& manifest_hash);
ExplanationSet ParseExplanationJson(std::string_view text);

std::string ImportanceCsv(const ImportanceTable& table, const std::string& manifest_hash);

// Long format: feature,row_id,x,phi.
std::string PdpCsv(const std::vector<std::string>& features,
                   const std::vector<std::vector<DependencePoint>>& points,
                   const ExplanationSet& explanations, const std::string& manifest_hash);

// FeatureCollection of Point features with properties
// {row_id, beta, intercept, masked[, lower, upper]}.
std::string SvcGeoJson(const SvcSurface& surface, const ExplanationSet& explanations,
                       const std::string& manifest_hash);

std::string BootstrapJson(const BootstrapSummary& summary, const std::string& manifest_hash);
BootstrapSummary ParseBootstrapJson(std::string_view text);

}  // namespace geoshap

#endif  // GEOSHAP_IO_HPP_

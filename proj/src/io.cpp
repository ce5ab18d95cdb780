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

#include "geoshap/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geoshap/error.hpp"

namespace geoshap {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string Trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool IsMissing(const std::string& cell) {
  static const std::set<std::string> kMissing = {"", "NA", "na", "N/A", "NaN", "nan",
                                                 "null", "NULL", "None"};
  return kMissing.contains(cell);
}

std::optional<double> ParseNumber(const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string HashLine(const std::string& hash) { return "# manifest_hash=" + hash + "\n"; }

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) Fail(ErrorKind::kIo, "cannot format number");
  return std::string(buffer, ptr);
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    Fail(ErrorKind::kIo, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

void WriteFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) Fail(ErrorKind::kIo, "failed writing " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

DataSet ReadCsv(std::istream& in, const CsvSelection& selection, IngestReport* report) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty() && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    header = SplitCsvLine(line);
    break;
  }
  if (header.empty()) Fail(ErrorKind::kData, "CSV has no header row");
  for (auto& h : header) h = Trim(h);
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!index.emplace(header[c], c).second) {
      Fail(ErrorKind::kData, "duplicate CSV column '" + header[c] + "'");
    }
  }
  auto column = [&](const std::string& name, const char* role) {
    const auto it = index.find(name);
    if (it == index.end()) {
      Fail(ErrorKind::kData, std::string(role) + " column '" + name + "' not found in header");
    }
    return it->second;
  };
  const std::size_t x_col = column(selection.x_column, "coordinate");
  const std::size_t y_col = column(selection.y_column, "coordinate");
  std::optional<std::size_t> target_col;
  if (selection.target) target_col = column(*selection.target, "target");
  std::optional<std::size_t> id_col;
  if (selection.id_column) id_col = column(*selection.id_column, "id");
  for (const auto& name : selection.exclude) column(name, "excluded");

  std::vector<std::string> names;
  std::vector<std::size_t> feature_cols;
  if (!selection.include.empty()) {
    for (const auto& name : selection.include) {
      const std::size_t c = column(name, "feature");
      if (c == x_col || c == y_col) {
        Fail(ErrorKind::kData, "coordinate column '" + name + "' cannot be a feature");
      }
      names.push_back(name);
      feature_cols.push_back(c);
    }
  } else {
    const std::set<std::string> excluded(selection.exclude.begin(), selection.exclude.end());
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == x_col || c == y_col || c == target_col || c == id_col) continue;
      if (excluded.contains(header[c]) || header[c] == "row_id") continue;
      names.push_back(header[c]);
      feature_cols.push_back(c);
    }
  }
  if (names.empty()) Fail(ErrorKind::kData, "no feature columns selected");

  std::vector<std::size_t> selected = feature_cols;
  selected.push_back(x_col);
  selected.push_back(y_col);
  if (target_col) selected.push_back(*target_col);

  std::vector<std::vector<double>> values;
  std::vector<std::string> ids;
  IngestReport local_report;
  std::size_t data_row = 0;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      Fail(ErrorKind::kData, "line " + std::to_string(line_number) + " has " +
                                 std::to_string(fields.size()) + " fields, header has " +
                                 std::to_string(header.size()));
    }
    const std::string id = id_col ? Trim(fields[*id_col]) : std::to_string(data_row);
    ++data_row;
    ++local_report.rows_read;
    std::vector<double> row;
    bool missing = false;
    for (std::size_t c : selected) {
      const std::string cell = Trim(fields[c]);
      if (IsMissing(cell)) {
        missing = true;
        break;
      }
      const auto number = ParseNumber(cell);
      if (!number) {
        Fail(ErrorKind::kData, "non-numeric value '" + cell + "' in column '" + header[c] +
                                   "' at line " + std::to_string(line_number));
      }
      row.push_back(*number);
    }
    if (missing) {
      local_report.dropped_row_ids.push_back(id);
      continue;
    }
    values.push_back(std::move(row));
    ids.push_back(id);
  }
  if (values.empty()) Fail(ErrorKind::kData, "CSV contains no usable rows");

  const auto n = static_cast<Eigen::Index>(values.size());
  const auto p = static_cast<Eigen::Index>(names.size());
  Matrix features(n, p), coords(n, 2);
  std::optional<Vector> target;
  if (target_col) target = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) features(i, j) = row[static_cast<std::size_t>(j)];
    coords(i, 0) = row[static_cast<std::size_t>(p)];
    coords(i, 1) = row[static_cast<std::size_t>(p) + 1];
    if (target) (*target)(i) = row[static_cast<std::size_t>(p) + 2];
  }
  if (report) *report = std::move(local_report);
  return DataSet(std::move(names), std::move(features), std::move(coords), std::move(target),
                 std::move(ids));
}

DataSet IngestCsv(const std::filesystem::path& path, const CsvSelection& selection,
                  IngestReport* report) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot read " + path.string());
  return ReadCsv(in, selection, report);
}

std::string SimulationCsv(const SyntheticTruth& truth, const std::string& manifest_hash) {
  const DataSet& d = truth.data;
  std::string out = HashLine(manifest_hash) + "row_id";
  for (const auto& name : d.feature_names()) out += "," + CsvField(name);
  out += ",u,v,y\n";
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out += CsvField(d.row_ids()[i]);
    for (Eigen::Index j = 0; j < d.features().cols(); ++j) out += "," + FormatDouble(d.features()(r, j));
    out += "," + FormatDouble(d.coords()(r, 0)) + "," + FormatDouble(d.coords()(r, 1));
    out += "," + FormatDouble((*d.target())(r)) + "\n";
  }
  return out;
}

std::string TruthCsv(const SyntheticTruth& truth, const std::string& manifest_hash) {
  const DataSet& d = truth.data;
  std::string out = HashLine(manifest_hash) + "row_id,beta0";
  for (const auto& name : d.feature_names()) out += ",beta_" + CsvField(name);
  out += ",signal\n";
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out += CsvField(d.row_ids()[i]) + "," + FormatDouble(truth.beta0(r));
    for (Eigen::Index j = 0; j < truth.betas.cols(); ++j) out += "," + FormatDouble(truth.betas(r, j));
    out += "," + FormatDouble(truth.signal(r)) + "\n";
  }
  return out;
}

std::string ExplanationJson(const ExplanationSet& e, const std::string& manifest_hash) {
  Json out;
  out["manifest_hash"] = manifest_hash;
  out["include_geo"] = e.include_geo;
  out["features"] = e.feature_names;
  out["base_value"] = e.base_value();
  Json rows = Json::array();
  for (const auto& row : e.rows) {
    const auto& c = row.components;
    Json r;
    r["row_id"] = row.row_id;
    r["coords"] = {row.coords[0], row.coords[1]};
    r["prediction"] = c.prediction;
    r["phi0"] = c.phi0;
    r["phi_geo"] = c.phi_geo;
    Json phi = Json::object(), phi_geo_x = Json::object();
    for (std::size_t j = 0; j < e.n_features(); ++j) {
      phi[e.feature_names[j]] = c.phi[j];
      phi_geo_x[e.feature_names[j]] = c.phi_geo_x[j];
    }
    r["phi"] = std::move(phi);
    r["phi_geo_x"] = std::move(phi_geo_x);
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out.dump(1) + "\n";
}

ExplanationSet ParseExplanationJson(std::string_view text) {
  try {
    const Json in = Json::parse(text);
    ExplanationSet e;
    e.feature_names = in.at("features").get<std::vector<std::string>>();
    e.include_geo = in.at("include_geo").get<bool>();
    const double base = in.at("base_value").get<double>();
    for (const Json& r : in.at("rows")) {
      ExplanationRow row;
      row.row_id = r.at("row_id").get<std::string>();
      row.coords = {r.at("coords").at(0).get<double>(), r.at("coords").at(1).get<double>()};
      auto& c = row.components;
      c.prediction = r.at("prediction").get<double>();
      c.phi0 = r.contains("phi0") ? r["phi0"].get<double>() : base;
      c.phi_geo = r.at("phi_geo").get<double>();
      for (const auto& name : e.feature_names) {
        c.phi.push_back(r.at("phi").at(name).get<double>());
        c.phi_geo_x.push_back(r.at("phi_geo_x").at(name).get<double>());
      }
      e.rows.push_back(std::move(row));
    }
    return e;
  } catch (const Json::exception& ex) {
    Fail(ErrorKind::kData, std::string("malformed explanation file: ") + ex.what());
  }
}

std::string ImportanceCsv(const ImportanceTable& table, const std::string& manifest_hash) {
  std::string out = HashLine(manifest_hash) + "feature,primary,geo,total\n";
  for (const auto& row : table.rows) {
    out += CsvField(row.name) + "," + FormatDouble(row.primary) + "," + FormatDouble(row.geo) +
           "," + FormatDouble(row.total) + "\n";
  }
  return out;
}

std::string PdpCsv(const std::vector<std::string>& features,
                   const std::vector<std::vector<DependencePoint>>& points,
                   const ExplanationSet& explanations, const std::string& manifest_hash) {
  std::string out = HashLine(manifest_hash) + "feature,row_id,x,phi\n";
  for (std::size_t f = 0; f < features.size(); ++f) {
    for (const auto& pt : points[f]) {
      out += CsvField(features[f]) + "," + CsvField(explanations.rows[pt.row].row_id) + "," +
             FormatDouble(pt.x) + "," + FormatDouble(pt.phi) + "\n";
    }
  }
  return out;
}

std::string SvcGeoJson(const SvcSurface& surface, const ExplanationSet& explanations,
                       const std::string& manifest_hash) {
  if (surface.beta.size() != explanations.rows.size()) {
    Fail(ErrorKind::kInvalidArgument, "surface does not match explanation rows");
  }
  Json out;
  out["type"] = "FeatureCollection";
  out["manifest_hash"] = manifest_hash;
  out["feature"] = surface.feature;
  out["kernel"] = SpatialKernelName(surface.kernel);
  out["bandwidth"] = surface.bandwidth;
  Json features = Json::array();
  const bool has_ci = !surface.lower.empty();
  for (std::size_t i = 0; i < surface.beta.size(); ++i) {
    const auto& row = explanations.rows[i];
    Json f;
    f["type"] = "Feature";
    f["geometry"] = {{"type", "Point"}, {"coordinates", {row.coords[0], row.coords[1]}}};
    Json props;
    props["row_id"] = row.row_id;
    props["beta"] = surface.beta[i];
    props["intercept"] = surface.intercept[i];
    props["masked"] = static_cast<bool>(surface.masked[i]);
    if (has_ci) {
      props["lower"] = surface.lower[i];
      props["upper"] = surface.upper[i];
    }
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  out["features"] = std::move(features);
  return out.dump(1) + "\n";
}

std::string BootstrapJson(const BootstrapSummary& s, const std::string& manifest_hash) {
  Json out;
  out["manifest_hash"] = manifest_hash;
  out["replicates"] = s.replicates;
  out["failed"] = s.failed;
  out["level"] = 0.95;
  out["components"] = s.components;
  out["svc_bandwidths"] = s.svc_bandwidths;
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < s.point.rows(); ++i) {
    Json r;
    r["row_id"] = s.row_ids[static_cast<std::size_t>(i)];
    Json point = Json::array(), lower = Json::array(), upper = Json::array();
    for (Eigen::Index c = 0; c < s.point.cols(); ++c) {
      point.push_back(s.point(i, c));
      lower.push_back(s.lower(i, c));
      upper.push_back(s.upper(i, c));
    }
    r["point"] = std::move(point);
    r["lower"] = std::move(lower);
    r["upper"] = std::move(upper);
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out.dump(1) + "\n";
}

BootstrapSummary ParseBootstrapJson(std::string_view text) {
  try {
    const Json in = Json::parse(text);
    BootstrapSummary s;
    s.replicates = in.at("replicates").get<std::size_t>();
    s.failed = in.at("failed").get<std::size_t>();
    s.components = in.at("components").get<std::vector<std::string>>();
    s.svc_bandwidths = in.value("svc_bandwidths", std::vector<double>{});
    const Json& rows = in.at("rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(s.components.size());
    s.point.resize(n, c);
    s.lower.resize(n, c);
    s.upper.resize(n, c);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Json& r = rows.at(static_cast<std::size_t>(i));
      s.row_ids.push_back(r.at("row_id").get<std::string>());
      for (Eigen::Index k = 0; k < c; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        s.point(i, k) = r.at("point").at(kk).get<double>();
        s.lower(i, k) = r.at("lower").at(kk).get<double>();
        s.upper(i, k) = r.at("upper").at(kk).get<double>();
      }
    }
    return s;
  } catch (const Json::exception& ex) {
    Fail(ErrorKind::kData, std::string("malformed bootstrap file: ") + ex.what());
  }
}

}  // namespace geoshap

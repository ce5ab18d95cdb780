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

#include <sstream>

#include <json.hpp>

#include "geoshap/error.hpp"
#include "geoshap/io.hpp"
#include "geoshap/kernel.hpp"
#include "geoshap/synthetic.hpp"
#include "test_util.hpp"

namespace geoshap {
namespace {

using Json = nlohmann::json;

DataSet Parse(const std::string& text, CsvSelection sel = {}, IngestReport* report = nullptr) {
  std::istringstream in(text);
  return ReadCsv(in, sel, report);
}

std::string ErrorText(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(Csv, ReadsSelectedColumns) {
  CsvSelection sel;
  sel.target = "y";
  sel.id_column = "id";
  const DataSet d = Parse("# comment\nid,a,\"b\",u,v,y\nr1,1,2,0.5,0.25,9\n\"r,2\",3,4e-1,1,1,-1\n",
                          sel);
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(d.row_ids(), (std::vector<std::string>{"r1", "r,2"}));
  EXPECT_EQ(d.features()(1, 1), 0.4);
  EXPECT_EQ(d.coords()(0, 1), 0.25);
  EXPECT_EQ((*d.target())(1), -1.0);
}

TEST(Csv, IncludeAndExclude) {
  CsvSelection sel;
  sel.exclude = {"b"};
  EXPECT_EQ(Parse("a,b,c,u,v\n1,2,3,0,0\n", sel).feature_names(),
            (std::vector<std::string>{"a", "c"}));
  sel.exclude.clear();
  sel.include = {"c", "a"};
  EXPECT_EQ(Parse("a,b,c,u,v\n1,2,3,0,0\n", sel).feature_names(),
            (std::vector<std::string>{"c", "a"}));
}

TEST(Csv, MissingSelectedValueDropsRow) {
  IngestReport report;
  CsvSelection sel;
  sel.exclude = {"note"};
  const DataSet d = Parse("a,u,v,note\n1,0,0,x\n,0,0,x\n3,NA,0,\n4,0,0,\n", sel, &report);
  EXPECT_EQ(d.n_rows(), 2u);
  EXPECT_EQ(report.rows_read, 4u);
  EXPECT_EQ(report.dropped_row_ids, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(d.row_ids(), (std::vector<std::string>{"0", "3"}));
}

TEST(Csv, ErrorsNameTheProblem) {
  EXPECT_NE(ErrorText([] { Parse("a,x,v\n1,2,3\n"); }).find("'u'"), std::string::npos);
  const std::string bad = ErrorText([] { Parse("a,u,v\n1,0,0\nabc,0,0\n"); });
  EXPECT_NE(bad.find("'abc'"), std::string::npos);
  EXPECT_NE(bad.find("line 3"), std::string::npos);
  EXPECT_NE(ErrorText([] { Parse("a,u,v\n,0,0\n"); }).find("no usable rows"), std::string::npos);
  EXPECT_NE(ErrorText([] { Parse(""); }).find("header"), std::string::npos);
  EXPECT_NE(ErrorText([] { Parse("a,u,v\n1,2\n"); }).find("fields"), std::string::npos);
  CsvSelection sel;
  sel.target = "y";
  EXPECT_NE(ErrorText([&] { Parse("a,u,v\n1,0,0\n", sel); }).find("'y'"), std::string::npos);
  EXPECT_THROW(IngestCsv("/nonexistent/file.csv", CsvSelection{}), Error);
}

TEST(Formatting, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(1e-300), "1e-300");
  EXPECT_EQ(FormatDouble(-2.5), "-2.5");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(FormatDouble(third)), third);
}

TEST(Hashing, Sha256KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

ExplanationSet SampleExplanations() {
  const auto f = testing::MakeOracle(5, [](std::span<const double> x) {
    return x[0] * x[3] + std::tanh(x[1]) - 0.3 * x[2] * x[4];
  });
  const DataSet d = testing::RandomData(12, 3, 4);
  return Explain(d, *f, BackgroundSet::Sample(d, 6, 1), ExplainConfig{});
}

TEST(ExplanationFile, RoundTripKeepsEfficiency) {
  const ExplanationSet e = SampleExplanations();
  const std::string text = ExplanationJson(e, "abc123");
  const ExplanationSet back = ParseExplanationJson(text);
  ASSERT_EQ(back.rows.size(), e.rows.size());
  EXPECT_EQ(back.feature_names, e.feature_names);
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    EXPECT_TRUE(VerifyEfficiency(back.rows[i].components, 1e-8));
    EXPECT_EQ(back.rows[i].components.phi, e.rows[i].components.phi);
    EXPECT_EQ(back.rows[i].coords, e.rows[i].coords);
  }
  EXPECT_EQ(ExplanationJson(back, "abc123"), text);
  const Json j = Json::parse(text);
  EXPECT_EQ(j["manifest_hash"], "abc123");
  EXPECT_TRUE(j["rows"][0]["phi"].contains("x2"));
  EXPECT_THROW(ParseExplanationJson("{\"rows\": 3}"), Error);
}

TEST(SvcGeoJson, PointFeatureGrammar) {
  const ExplanationSet e = SampleExplanations();
  SvcSurface s;
  s.feature = "x1";
  s.bandwidth = 10;
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    s.beta.push_back(0.5 * static_cast<double>(i));
    s.intercept.push_back(1.0);
    s.masked.push_back(i % 3 == 0);
  }
  const Json j = Json::parse(SvcGeoJson(s, e, "h"));
  EXPECT_EQ(j["type"], "FeatureCollection");
  ASSERT_EQ(j["features"].size(), e.rows.size());
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    const Json& f = j["features"][i];
    EXPECT_EQ(f["type"], "Feature");
    EXPECT_EQ(f["geometry"]["type"], "Point");
    ASSERT_EQ(f["geometry"]["coordinates"].size(), 2u);
    EXPECT_EQ(f["geometry"]["coordinates"][0].get<double>(), e.rows[i].coords[0]);
    EXPECT_TRUE(f["properties"]["masked"].is_boolean());
    EXPECT_EQ(f["properties"]["masked"].get<bool>(), i % 3 == 0);
    EXPECT_EQ(f["properties"]["beta"].get<double>(), s.beta[i]);
    EXPECT_FALSE(f["properties"].contains("lower"));
  }
}

TEST(BootstrapFile, RoundTrip) {
  BootstrapSummary s;
  s.row_ids = {"a", "b"};
  s.components = {"GEO", "x1"};
  s.point = (Matrix(2, 2) << 1, 2, 3, 4).finished();
  s.lower = s.point.array() - 0.1;
  s.upper = s.point.array() + 1.0 / 3.0;
  s.replicates = 99;
  s.failed = 1;
  s.svc_bandwidths = {42};
  const std::string text = BootstrapJson(s, "h");
  const BootstrapSummary back = ParseBootstrapJson(text);
  EXPECT_EQ(back.row_ids, s.row_ids);
  EXPECT_EQ(back.upper, s.upper);
  EXPECT_EQ(back.lower, s.lower);
  EXPECT_EQ(back.replicates, 99u);
  EXPECT_EQ(BootstrapJson(back, "h"), text);
}

TEST(Synthetic, SvcGeneratorIdentity) {
  const SyntheticTruth t = GenerateSvc(200, 3, 0.0, 1);
  EXPECT_EQ(t.data.feature_names(), (std::vector<std::string>{"x1", "x2", "z1"}));
  for (Eigen::Index i = 0; i < 200; ++i) {
    const double u = t.data.coords()(i, 0), v = t.data.coords()(i, 1);
    EXPECT_EQ(t.beta0(i), 3.0 * (u + v));
    EXPECT_EQ(t.betas(i, 0), 1.0 + 2.0 * u);
    EXPECT_EQ(t.betas(i, 1), 2.0);
    EXPECT_EQ(t.betas(i, 2), 0.0);
    const double y = t.beta0(i) + t.betas(i, 0) * t.data.features()(i, 0) +
                     t.betas(i, 1) * t.data.features()(i, 1);
    EXPECT_NEAR((*t.data.target())(i), y, 1e-12);
  }
  const SyntheticTruth again = GenerateSvc(200, 3, 0.0, 1);
  EXPECT_EQ(again.data.features(), t.data.features());
  EXPECT_EQ(SimulationCsv(again, "h"), SimulationCsv(t, "h"));
  EXPECT_NE(GenerateSvc(200, 4, 0.0).data.coords(), t.data.coords());
  EXPECT_THROW(GenerateSvc(50, 1, 0.1), Error);
}

TEST(Synthetic, CsvReadsBackExactly) {
  const SyntheticTruth t = GenerateSvc(120, 8, 0.2);
  std::istringstream in(SimulationCsv(t, "h"));
  CsvSelection sel;
  sel.target = "y";
  sel.id_column = "row_id";
  const DataSet d = ReadCsv(in, sel);
  EXPECT_EQ(d.features(), t.data.features());
  EXPECT_EQ(d.coords(), t.data.coords());
  EXPECT_EQ(*d.target(), *t.data.target());
}

TEST(Synthetic, NonlinearProcessHasNoSpatialSignal) {
  const SyntheticTruth t = GenerateNonlinear(300, 2);
  for (Eigen::Index i = 0; i < 300; ++i) {
    EXPECT_EQ(t.signal(i), SCurve(t.data.features()(i, 0)));
  }
  EXPECT_EQ(t.betas.cwiseAbs().maxCoeff(), 0.0);
}

}  // namespace
}  // namespace geoshap

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

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "geoshap/analysis.hpp"
#include "geoshap/bridge.hpp"
#include "geoshap/error.hpp"
#include "geoshap/io.hpp"
#include "geoshap/kernel.hpp"
#include "geoshap/models.hpp"
#include "test_util.hpp"

namespace geoshap {
namespace {

std::string Server(const std::string& args) { return std::string(GEOSHAP_TEST_SERVER) + " " + args; }

std::string BridgeError(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBridge) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no bridge error";
  return "";
}

TEST(BridgeWire, EncodesShortestNumbers) {
  Matrix rows(2, 2);
  rows << 1.0, 0.1, -2.5, 1e-300;
  EXPECT_EQ(EncodePredictRequest(4, rows),
            R"({"type":"predict","id":4,"rows":[[1.0,0.1],[-2.5,1e-300]]})");
  EXPECT_EQ(EncodeFitRequest(5, rows, (Vector(2) << 3, 0.25).finished()),
            R"({"type":"fit","id":5,"rows":[[1.0,0.1],[-2.5,1e-300]],"targets":[3.0,0.25]})");
  EXPECT_EQ(EncodeShutdown(), R"({"type":"shutdown"})");
  rows(0, 0) = NAN;
  EXPECT_THROW(EncodePredictRequest(1, rows), Error);
}

TEST(BridgeWire, DecodesReady) {
  const auto caps = DecodeReady(R"({"type":"ready","n_columns":9,"concurrency_safe":true})");
  EXPECT_EQ(caps.n_columns, 9u);
  EXPECT_FALSE(caps.trainable);
  EXPECT_TRUE(caps.concurrency_safe);
  EXPECT_THROW(DecodeReady(R"({"type":"ready"})"), Error);
  EXPECT_THROW(DecodeReady("ready"), Error);
}

TEST(BridgeSession, HandshakeAndEchoPredict) {
  auto s = BridgeSession::Handshake(Server("echo 9"));
  EXPECT_EQ(s->capabilities().n_columns, 9u);
  EXPECT_TRUE(s->capabilities().trainable);
  Matrix rows = Matrix::Zero(2, 9);
  rows(0, 0) = 1;
  rows(1, 0) = 2;
  rows(1, 5) = 7;
  const Vector p = s->PredictBatch(rows);
  EXPECT_EQ(p, (Vector(2) << 1, 2).finished());
  EXPECT_EQ(s->PredictBatch(Matrix(0, 9)).size(), 0);
  EXPECT_EQ(s->last_id(), 1u);
  EXPECT_EQ(s->Shutdown(), 0);
  EXPECT_EQ(s->Shutdown(), 0);
  EXPECT_THROW(s->PredictBatch(rows), Error);
}

TEST(BridgeSession, TranscriptMatchesFixture) {
  testing::TempDir dir;
  const std::string log = dir.file("transcript.jsonl");
  auto s = BridgeSession::Handshake(Server("echo 3 --log " + log), 3);
  Matrix first(2, 3);
  first << 1.0, 2.0, 3.0, 0.1, -2.5, 1e-300;
  EXPECT_EQ(s->PredictBatch(first), (Vector(2) << 1.0, 0.1).finished());
  Matrix fit = Matrix::Zero(2, 3);
  fit(0, 0) = 1.0;
  fit(1, 0) = 3.0;
  s->FitRemote(fit, (Vector(2) << 4.0, 6.0).finished());
  Matrix probe = Matrix::Zero(1, 3);
  probe(0, 0) = 0.5;
  EXPECT_EQ(s->PredictBatch(probe)(0), 3.5);
  EXPECT_EQ(s->Shutdown(), 0);
  EXPECT_EQ(ReadFile(log), ReadFile(std::string(GEOSHAP_FIXTURES) + "/bridge_transcript.jsonl"));
}

TEST(BridgeSession, ColumnMismatchRefusedBeforePredict) {
  testing::TempDir dir;
  const std::string log = dir.file("log");
  const std::string msg = BridgeError(
      [&] { BridgeSession::Handshake(Server("echo 9 --log " + log), std::size_t{4}); });
  EXPECT_NE(msg.find("declares 9 columns"), std::string::npos);
  EXPECT_EQ(ReadFile(log).find("predict"), std::string::npos);
}

TEST(BridgeSession, GarbageHandshake) {
  const std::string msg = BridgeError([] { BridgeSession::Handshake(Server("garbage 3")); });
  EXPECT_NE(msg.find("hello, this is not json"), std::string::npos);
  EXPECT_NE(msg.find("handshake"), std::string::npos);
}

TEST(BridgeSession, MissingArtifactFailsBeforeReady) {
  const std::string msg =
      BridgeError([] { BridgeSession::Handshake(Server("linear /nonexistent/model.json")); });
  EXPECT_NE(msg.find("handshake"), std::string::npos);
}

TEST(BridgeSession, ServerDeathIsATransportError) {
  auto s = BridgeSession::Handshake(Server("die 3"));
  const std::string msg = BridgeError([&] { s->PredictBatch(Matrix::Ones(2, 3)); });
  EXPECT_NE(msg.find("request 1"), std::string::npos);
  EXPECT_NE(msg.find("transport"), std::string::npos);
}

TEST(BridgeSession, Timeout) {
  BridgeOptions options;
  options.timeout = std::chrono::milliseconds(300);
  auto s = BridgeSession::Handshake(Server("hang 3"), {}, options);
  const std::string msg = BridgeError([&] { s->PredictBatch(Matrix::Ones(1, 3)); });
  EXPECT_NE(msg.find("request 1"), std::string::npos);
  EXPECT_NE(msg.find("timed out"), std::string::npos);
  EXPECT_EQ(s->Shutdown(), -1);
}

TEST(BridgeSession, KillReachesProcessesStartedByTheShell) {
  BridgeOptions options;
  options.timeout = std::chrono::milliseconds(200);
  // The trailing command forces the shell to fork rather than exec.
  auto s = BridgeSession::Handshake(Server("hang 11; true"), {}, options);
  EXPECT_THROW(s->PredictBatch(Matrix::Ones(1, 11)), Error);
  s->Shutdown();
  // The bracket keeps pgrep from matching its own shell.
  const std::string probe = "pgrep -f 'bridge_test_serve[r] hang 11' > /dev/null";
  bool alive = true;
  for (int attempt = 0; attempt < 50 && alive; ++attempt) {
    alive = std::system(probe.c_str()) == 0;
    if (alive) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  EXPECT_FALSE(alive);
}

TEST(BridgeSession, ErrorResponsesAndBadIds) {
  auto s = BridgeSession::Handshake(Server("error 3"));
  const std::string msg = BridgeError([&] { s->PredictBatch(Matrix::Ones(1, 3)); });
  EXPECT_NE(msg.find("model exploded"), std::string::npos);
  EXPECT_NE(msg.find("request 1"), std::string::npos);
  const std::string fit = BridgeError([&] { s->FitRemote(Matrix::Ones(1, 3), Vector::Ones(1)); });
  EXPECT_NE(fit.find("not trainable"), std::string::npos);
  auto w = BridgeSession::Handshake(Server("wrong-id 3"));
  EXPECT_NE(BridgeError([&] { w->PredictBatch(Matrix::Ones(1, 3)); }).find("id mismatch"),
            std::string::npos);
}

TEST(BridgeSession, FitLengthMismatch) {
  auto s = BridgeSession::Handshake(Server("echo 3"));
  EXPECT_NE(BridgeError([&] { s->FitRemote(Matrix::Ones(3, 3), Vector::Ones(2)); })
                .find("3 rows but 2 targets"),
            std::string::npos);
  EXPECT_THROW(s->PredictBatch(Matrix::Ones(1, 4)), Error);
}

class BridgeParity : public ::testing::Test {
 protected:
  void SetUp() override {
    base_ = testing::RandomData(60, 3, 17);
    Vector y(60);
    for (Eigen::Index i = 0; i < 60; ++i) {
      y(i) = 0.5 + base_.features()(i, 0) - 2.0 * base_.features()(i, 2) + 3.0 * base_.coords()(i, 1);
    }
    data_ = std::make_unique<DataSet>(base_.feature_names(), base_.features(), base_.coords(), y);
    model_ = std::make_shared<LinearModel>(TrainLinear(data_->model_matrix(), y));
    SaveModel(*model_, dir_.file("linear.json"));
  }

  std::string Command() const { return Server("linear " + dir_.file("linear.json")); }

  testing::TempDir dir_;
  DataSet base_ = testing::RandomData(1, 1, 0);
  std::unique_ptr<DataSet> data_;
  std::shared_ptr<LinearModel> model_;
};

TEST_F(BridgeParity, PredictionsAndExplanationsMatchInProcess) {
  auto oracle = std::make_shared<BridgeOracle>(BridgeSession::Handshake(Command(), data_->n_columns()));
  EXPECT_FALSE(oracle->concurrency_safe());
  const Matrix rows = data_->model_matrix();
  EXPECT_LT((oracle->predict(rows) - model_->predict(rows)).cwiseAbs().maxCoeff(), 1e-9);
  const BackgroundSet bg = BackgroundSet::Sample(*data_, 10, 1);
  ExplainConfig cfg;
  cfg.threads = 4;
  const auto bridged = Explain(*data_, *oracle, bg, cfg);
  const auto local = Explain(*data_, *model_, bg, cfg);
  for (std::size_t i = 0; i < data_->n_rows(); ++i) {
    const auto& a = bridged.rows[i].components;
    const auto& b = local.rows[i].components;
    EXPECT_NEAR(a.phi_geo, b.phi_geo, 1e-6);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(a.phi[j], b.phi[j], 1e-6);
      EXPECT_NEAR(a.phi_geo_x[j], b.phi_geo_x[j], 1e-6);
    }
  }
}

TEST_F(BridgeParity, RefitShiftsPredictions) {
  auto s = BridgeSession::Handshake(Command(), data_->n_columns());
  const Matrix rows = data_->model_matrix();
  const Vector before = s->PredictBatch(rows);
  s->FitRemote(rows, data_->target()->array() + 5.0);
  const Vector after = s->PredictBatch(rows);
  EXPECT_LT(((after - before).array() - 5.0).abs().maxCoeff(), 1e-9);
}

TEST_F(BridgeParity, BridgedTrainerBootstrapMatchesBuiltIn) {
  const BackgroundSet bg = BackgroundSet::Sample(*data_, 10, 1);
  BootstrapConfig cfg;
  cfg.replicates = 4;
  cfg.seed = 3;
  cfg.svc = false;
  const auto bridged = Bootstrap(*data_, BridgeTrainer(Command(), data_->n_columns()), bg,
                                 ExplainConfig{}, cfg);
  const auto local = Bootstrap(*data_, LinearTrainer(), bg, ExplainConfig{}, cfg);
  EXPECT_LT((bridged.lower - local.lower).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((bridged.upper - local.upper).cwiseAbs().maxCoeff(), 1e-6);
}

}  // namespace
}  // namespace geoshap

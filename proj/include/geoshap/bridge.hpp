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

// Out-of-process models. The engine spawns a command and talks to it with
// line-delimited UTF-8 JSON over the child's stdin/stdout:
//
//   server -> {"type":"ready","n_columns":9,"trainable":true}
//   engine -> {"type":"predict","id":1,"rows":[[...],...]}
//   server -> {"type":"prediction","id":1,"values":[...]}
//   engine -> {"type":"fit","id":2,"rows":[[...]],"targets":[...]}
//   server -> {"type":"fit_ok","id":2}
//   engine -> {"type":"shutdown"}
//
// A server may answer any request with {"type":"error","id":n,"message":"..."}
// and may add "concurrency_safe":true to its ready message. Numbers use the
// shortest decimal form that parses back to the same double.

#ifndef GEOSHAP_BRIDGE_HPP_
#define GEOSHAP_BRIDGE_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "geoshap/dataset.hpp"
#include "geoshap/oracle.hpp"

namespace geoshap {

struct BridgeCapabilities {
  std::size_t n_columns = 0;
  bool trainable = false;
  bool concurrency_safe = false;
};

struct BridgeOptions {
  std::chrono::milliseconds timeout{60000};
};

// Wire encoding, exposed for conformance tests.
std::string EncodePredictRequest(std::uint64_t id, const Matrix& rows);
std::string EncodeFitRequest(std::uint64_t id, const Matrix& rows, const Vector& targets);
std::string EncodeShutdown();
BridgeCapabilities DecodeReady(const std::string& line);

// One child process. Requests are serialized; ids increase from 1.
class BridgeSession {
 public:
  // Spawns `command` through /bin/sh and waits for the ready message. With
  // expected_columns set, a server declaring a different width is refused
  // before any prediction.
  static std::unique_ptr<BridgeSession> Handshake(
      const std::string& command, std::optional<std::size_t> expected_columns = {},
      BridgeOptions options = {});

  ~BridgeSession();
  BridgeSession(const BridgeSession&) = delete;
  BridgeSession& operator=(const BridgeSession&) = delete;

  const BridgeCapabilities& capabilities() const { return capabilities_; }

  Vector PredictBatch(const Matrix& rows);
  void FitRemote(const Matrix& rows, const Vector& targets);

  // Sends shutdown and reaps the child. Returns its exit status, or -1 if it
  // had to be killed. Idempotent.
  int Shutdown();

  // Last request id sent.
  std::uint64_t last_id() const { return next_id_ - 1; }

 private:
  BridgeSession(int pid, int fd, BridgeOptions options);

  void WriteLine(const std::string& line, std::uint64_t id);
  std::string ReadLine(std::uint64_t id);

  int pid_;
  int fd_;
  BridgeOptions options_;
  BridgeCapabilities capabilities_;
  std::string buffer_;
  std::uint64_t next_id_ = 1;
  std::mutex mutex_;
  std::optional<int> exit_status_;
  bool broken_ = false;
};

using BridgeSessionPtr = std::shared_ptr<BridgeSession>;

class BridgeOracle final : public PredictionOracle {
 public:
  explicit BridgeOracle(BridgeSessionPtr session) : session_(std::move(session)) {}

  Vector predict(const Matrix& rows) const override { return session_->PredictBatch(rows); }
  std::size_t n_columns() const override { return session_->capabilities().n_columns; }
  bool concurrency_safe() const override {
    return session_->capabilities().concurrency_safe;
  }
  const BridgeSessionPtr& session() const { return session_; }

 private:
  BridgeSessionPtr session_;
};

// Each fit spawns a fresh session so bootstrap replicates never share a
// server.
class BridgeTrainer final : public Trainer {
 public:
  BridgeTrainer(std::string command, std::size_t n_columns, BridgeOptions options = {})
      : command_(std::move(command)), n_columns_(n_columns), options_(options) {}

  OraclePtr fit(const Matrix& rows, const Vector& targets) const override;
  std::string name() const override { return "bridge"; }

 private:
  std::string command_;
  std::size_t n_columns_;
  BridgeOptions options_;
};

}  // namespace geoshap

#endif  // GEOSHAP_BRIDGE_HPP_

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

#include "geoshap/bridge.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <thread>

#include <json.hpp>

#include "geoshap/error.hpp"

namespace geoshap {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

Json RowsToJson(const Matrix& rows) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < rows.cols(); ++c) row.push_back(rows(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

void CheckFinite(const Matrix& rows) {
  if (!rows.allFinite()) Fail(ErrorKind::kBridge, "cannot send non-finite values to a model server");
}

std::string Describe(std::uint64_t id) {
  return id == 0 ? std::string("handshake") : "request " + std::to_string(id);
}

}  // namespace

std::string EncodePredictRequest(std::uint64_t id, const Matrix& rows) {
  CheckFinite(rows);
  Json msg;
  msg["type"] = "predict";
  msg["id"] = id;
  msg["rows"] = RowsToJson(rows);
  return msg.dump();
}

std::string EncodeFitRequest(std::uint64_t id, const Matrix& rows, const Vector& targets) {
  CheckFinite(rows);
  if (!targets.allFinite()) Fail(ErrorKind::kBridge, "cannot send non-finite targets");
  Json msg;
  msg["type"] = "fit";
  msg["id"] = id;
  msg["rows"] = RowsToJson(rows);
  Json t = Json::array();
  for (Eigen::Index i = 0; i < targets.size(); ++i) t.push_back(targets(i));
  msg["targets"] = std::move(t);
  return msg.dump();
}

std::string EncodeShutdown() { return R"({"type":"shutdown"})"; }

BridgeCapabilities DecodeReady(const std::string& line) {
  Json msg;
  try {
    msg = Json::parse(line);
  } catch (const Json::exception&) {
    Fail(ErrorKind::kBridge, "handshake: expected a ready message, got '" + line + "'");
  }
  if (!msg.is_object() || msg.value("type", "") != "ready" || !msg.contains("n_columns") ||
      !msg["n_columns"].is_number_unsigned()) {
    Fail(ErrorKind::kBridge, "handshake: malformed ready message '" + line + "'");
  }
  BridgeCapabilities caps;
  caps.n_columns = msg["n_columns"].get<std::size_t>();
  caps.trainable = msg.value("trainable", false);
  caps.concurrency_safe = msg.value("concurrency_safe", false);
  return caps;
}

BridgeSession::BridgeSession(int pid, int fd, BridgeOptions options)
    : pid_(pid), fd_(fd), options_(options) {}

std::unique_ptr<BridgeSession> BridgeSession::Handshake(
    const std::string& command, std::optional<std::size_t> expected_columns,
    BridgeOptions options) {
  int fds[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    Fail(ErrorKind::kBridge, std::string("socketpair failed: ") + std::strerror(errno));
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    Fail(ErrorKind::kBridge, std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    // Own process group, so a kill reaches whatever the shell starts.
    setpgid(0, 0);
    // dup2 clears CLOEXEC on the duplicates.
    dup2(fds[1], STDIN_FILENO);
    dup2(fds[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(fds[1]);
  std::unique_ptr<BridgeSession> session(new BridgeSession(pid, fds[0], options));
  session->capabilities_ = DecodeReady(session->ReadLine(0));
  if (expected_columns && session->capabilities_.n_columns != *expected_columns) {
    const std::size_t got = session->capabilities_.n_columns;
    session->Shutdown();
    Fail(ErrorKind::kBridge, "model server declares " + std::to_string(got) +
                                 " columns but the dataset layout has " +
                                 std::to_string(*expected_columns));
  }
  return session;
}

BridgeSession::~BridgeSession() { Shutdown(); }

void BridgeSession::WriteLine(const std::string& line, std::uint64_t id) {
  std::string data = line + "\n";
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail(ErrorKind::kBridge, Describe(id) + ": transport error writing to model server: " +
                                   std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string BridgeSession::ReadLine(std::uint64_t id) {
  const auto deadline = Clock::now() + options_.timeout;
  for (;;) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) {
      broken_ = true;
      Fail(ErrorKind::kBridge, Describe(id) + ": model server timed out after " +
                                   std::to_string(options_.timeout.count()) + " ms");
    }
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      Fail(ErrorKind::kBridge, Describe(id) + ": poll failed: " + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[65536];
    const ssize_t n = recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail(ErrorKind::kBridge, Describe(id) + ": transport error: " + std::strerror(errno));
    }
    if (n == 0) {
      broken_ = true;
      Fail(ErrorKind::kBridge, Describe(id) + ": transport error: model server closed the connection");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

namespace {

Json ParseResponse(const std::string& line, std::uint64_t id, const char* expected_type) {
  Json msg;
  try {
    msg = Json::parse(line);
  } catch (const Json::exception&) {
    Fail(ErrorKind::kBridge, Describe(id) + ": malformed response '" + line.substr(0, 200) + "'");
  }
  if (!msg.is_object()) Fail(ErrorKind::kBridge, Describe(id) + ": response is not an object");
  if (!msg.contains("id") || !msg["id"].is_number_unsigned() ||
      msg["id"].get<std::uint64_t>() != id) {
    Fail(ErrorKind::kBridge, Describe(id) + ": response id mismatch in '" +
                                 line.substr(0, 200) + "'");
  }
  const std::string type = msg.value("type", "");
  if (type == "error") {
    Fail(ErrorKind::kBridge, Describe(id) + ": model server error: " +
                                 msg.value("message", std::string("(no message)")));
  }
  if (type != expected_type) {
    Fail(ErrorKind::kBridge, Describe(id) + ": expected '" + expected_type +
                                 "' response, got '" + type + "'");
  }
  return msg;
}

}  // namespace

Vector BridgeSession::PredictBatch(const Matrix& rows) {
  if (rows.rows() == 0) return Vector(0);
  if (static_cast<std::size_t>(rows.cols()) != capabilities_.n_columns) {
    Fail(ErrorKind::kBridge, "predict batch has " + std::to_string(rows.cols()) +
                                 " columns, server expects " +
                                 std::to_string(capabilities_.n_columns));
  }
  std::lock_guard lock(mutex_);
  if (exit_status_) Fail(ErrorKind::kBridge, "model server session is closed");
  const std::uint64_t id = next_id_++;
  WriteLine(EncodePredictRequest(id, rows), id);
  const Json msg = ParseResponse(ReadLine(id), id, "prediction");
  const Json& values = msg.contains("values") ? msg["values"] : Json();
  if (!values.is_array() || values.size() != static_cast<std::size_t>(rows.rows())) {
    Fail(ErrorKind::kBridge, Describe(id) + ": expected " + std::to_string(rows.rows()) +
                                 " values in prediction");
  }
  Vector out(rows.rows());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].is_number() || !std::isfinite(values[i].get<double>())) {
      Fail(ErrorKind::kBridge, Describe(id) + ": non-finite prediction at row " +
                                   std::to_string(i));
    }
    out(static_cast<Eigen::Index>(i)) = values[i].get<double>();
  }
  return out;
}

void BridgeSession::FitRemote(const Matrix& rows, const Vector& targets) {
  if (!capabilities_.trainable) {
    Fail(ErrorKind::kBridge, "model server is not trainable");
  }
  if (targets.size() != rows.rows()) {
    Fail(ErrorKind::kBridge, "fit request has " + std::to_string(rows.rows()) + " rows but " +
                                 std::to_string(targets.size()) + " targets");
  }
  if (static_cast<std::size_t>(rows.cols()) != capabilities_.n_columns) {
    Fail(ErrorKind::kBridge, "fit rows have the wrong column count");
  }
  std::lock_guard lock(mutex_);
  if (exit_status_) Fail(ErrorKind::kBridge, "model server session is closed");
  const std::uint64_t id = next_id_++;
  WriteLine(EncodeFitRequest(id, rows, targets), id);
  ParseResponse(ReadLine(id), id, "fit_ok");
}

int BridgeSession::Shutdown() {
  std::lock_guard lock(mutex_);
  if (exit_status_) return *exit_status_;
  const std::string line = EncodeShutdown() + "\n";
  (void)send(fd_, line.data(), line.size(), MSG_NOSIGNAL);
  shutdown(fd_, SHUT_WR);
  int status = 0;
  int result = -1;
  // A server that already timed out or hung up gets no grace period.
  const auto deadline = Clock::now() + (broken_ ? std::chrono::seconds(0) : std::chrono::seconds(5));
  for (;;) {
    const pid_t done = waitpid(pid_, &status, WNOHANG);
    if (done == pid_) {
      result = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      break;
    }
    if (done < 0 || Clock::now() > deadline) {
      kill(-pid_, SIGKILL);
      waitpid(pid_, &status, 0);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  close(fd_);
  exit_status_ = result;
  return result;
}

OraclePtr BridgeTrainer::fit(const Matrix& rows, const Vector& targets) const {
  BridgeSessionPtr session = BridgeSession::Handshake(command_, n_columns_, options_);
  session->FitRemote(rows, targets);
  return std::make_shared<BridgeOracle>(std::move(session));
}

}  // namespace geoshap

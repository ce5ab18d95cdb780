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

#ifndef GEOSHAP_ERROR_HPP_
#define GEOSHAP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace geoshap {

// Broad error classes. The CLI maps each to a distinct exit code.
enum class ErrorKind {
  kInvalidArgument,
  kData,
  kModel,
  kNumerical,
  kBudget,
  kBridge,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace geoshap

#endif  // GEOSHAP_ERROR_HPP_

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


// Batch front end. Every command writes its artifact and a
// <artifact>.manifest.json recording the resolved configuration, seeds and
// timings. Artifacts embed the manifest hash, a SHA-256 over the
// configuration only, so equal hashes mean byte-identical artifacts.

#ifndef GEOSHAP_TOOLS_COMMANDS_HPP_
#define GEOSHAP_TOOLS_COMMANDS_HPP_

#include <iosfwd>

namespace geoshap::cli {

// Exit codes. Each library error class maps to its own code.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitModel = 4;
inline constexpr int kExitNumerical = 5;
inline constexpr int kExitBudget = 6;
inline constexpr int kExitBridge = 7;
inline constexpr int kExitIo = 8;

// Environment variable holding the default for --threads.
inline constexpr const char* kThreadsEnv = "GEOSHAP_THREADS";

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geoshap::cli

#endif  // GEOSHAP_TOOLS_COMMANDS_HPP_

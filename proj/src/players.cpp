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

#include "geoshap/players.hpp"

#include "geoshap/error.hpp"

namespace geoshap {

std::string ToString(Coalition coalition, std::size_t m) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (!coalition.contains(i)) continue;
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

PlayerIndex::PlayerIndex(std::size_t n_features, bool include_geo)
    : n_features_(n_features), has_geo_(include_geo) {
  if (n_features == 0) Fail(ErrorKind::kInvalidArgument, "need at least one feature");
  if (size() > kMaxPlayers) {
    Fail(ErrorKind::kInvalidArgument,
         "at most " + std::to_string(kMaxPlayers) + " players are supported");
  }
}

std::vector<std::size_t> PlayerIndex::columns(std::size_t player) const {
  if (player < n_features_) return {player};
  if (has_geo_ && player == geo_player()) return {n_features_, n_features_ + 1};
  Fail(ErrorKind::kInvalidArgument, "player " + std::to_string(player) +
                                        " out of range");
}

std::vector<bool> PlayerIndex::instance_columns(Coalition coalition) const {
  std::vector<bool> out(n_columns(), true);
  for (std::size_t j = 0; j < n_features_; ++j) out[j] = coalition.contains(j);
  if (has_geo_) {
    const bool geo = coalition.contains(geo_player());
    out[n_features_] = geo;
    out[n_features_ + 1] = geo;
  }
  return out;
}

PlayerIndex BuildPlayers(const DataSet& dataset, bool include_geo) {
  return PlayerIndex(dataset.n_features(), include_geo);
}

}  // namespace geoshap

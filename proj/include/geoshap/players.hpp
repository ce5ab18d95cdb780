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

#ifndef GEOSHAP_PLAYERS_HPP_
#define GEOSHAP_PLAYERS_HPP_

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "geoshap/dataset.hpp"

namespace geoshap {

inline constexpr std::size_t kMaxPlayers = 62;

// Set of players encoded as a bitmask; bit i is player i.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t bits) : bits_(bits) {}

  static constexpr Coalition Empty() { return Coalition(0); }
  static constexpr Coalition Full(std::size_t m) {
    return Coalition(m == 0 ? 0 : (~std::uint64_t{0} >> (64 - m)));
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(std::size_t player) const {
    return (bits_ >> player) & 1u;
  }
  constexpr Coalition with(std::size_t player) const {
    return Coalition(bits_ | (std::uint64_t{1} << player));
  }
  constexpr Coalition without(std::size_t player) const {
    return Coalition(bits_ & ~(std::uint64_t{1} << player));
  }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr Coalition complement(std::size_t m) const {
    return Coalition(~bits_ & Full(m).bits());
  }

  friend constexpr bool operator==(Coalition, Coalition) = default;
  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  std::uint64_t bits_ = 0;
};

std::string ToString(Coalition coalition, std::size_t m);

// Maps players onto model input columns. Feature j is player j and, when
// present, the location player GEO is the last player and owns both
// coordinate columns.
class PlayerIndex {
 public:
  PlayerIndex(std::size_t n_features, bool include_geo);

  std::size_t size() const { return n_features_ + (has_geo_ ? 1 : 0); }
  std::size_t n_features() const { return n_features_; }
  bool has_geo() const { return has_geo_; }
  // Only meaningful when has_geo().
  std::size_t geo_player() const { return n_features_; }
  // Model input width: p + 2.
  std::size_t n_columns() const { return n_features_ + 2; }

  // Columns owned by the player.
  std::vector<std::size_t> columns(std::size_t player) const;

  // Per-column flag: column comes from the instance under this coalition.
  // Without a GEO player the coordinate columns always come from the
  // instance.
  std::vector<bool> instance_columns(Coalition coalition) const;

 private:
  std::size_t n_features_;
  bool has_geo_;
};

PlayerIndex BuildPlayers(const DataSet& dataset, bool include_geo);

}  // namespace geoshap

#endif  // GEOSHAP_PLAYERS_HPP_

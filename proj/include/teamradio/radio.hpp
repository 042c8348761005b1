// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_RADIO_HPP_
#define TEAMRADIO_RADIO_HPP_

#include <optional>

#include "teamradio/engine.hpp"
#include "teamradio/types.hpp"

namespace teamradio {

// Rule-based radio vocabulary: coarse positions of the two enemies plus the
// sender's board half, 5*5*2 = 50 of the 64 available two-word codes. The
// remaining 14 codes are reserved and never produced.
enum class Quadrant : uint8_t { NW = 0, NE, SW, SE, Unknown };
enum class BoardHalf : uint8_t { Top = 0, Bottom };

struct CoarseInfo {
  Quadrant enemy_a = Quadrant::Unknown;  // lower-id opponent
  Quadrant enemy_b = Quadrant::Unknown;  // higher-id opponent
  BoardHalf self_half = BoardHalf::Top;
  friend bool operator==(const CoarseInfo&, const CoarseInfo&) = default;
};

inline constexpr int kCoarseInfoCount = 50;

// Board partition: rows 0-5 are the top half, columns 0-5 the left half.
Quadrant quadrant_of(Pos p);
BoardHalf half_of(Pos p);
int region_cell_count(Quadrant q);
int region_cell_count(BoardHalf h);
bool pos_in_region(Pos p, Quadrant q);
bool pos_in_region(Pos p, BoardHalf h);

// Coarse summary of an observation: each enemy's quadrant when visible,
// Unknown otherwise; own half from the agent's row.
CoarseInfo summarize(const RawObservation& obs);

// Bijection CoarseInfo <-> index 0..49 <-> two base-8 digits, each + 1.
int coarse_index(const CoarseInfo& info);
CoarseInfo coarse_from_index(int index);
Message encode_message(const CoarseInfo& info);

// Codes 50..63 decode to nullopt (unknown symbol -> no information).
std::optional<CoarseInfo> decode_message(Message msg);

}  // namespace teamradio

#endif  // TEAMRADIO_RADIO_HPP_

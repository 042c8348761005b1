// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/radio.hpp"

namespace teamradio {

Quadrant quadrant_of(Pos p) {
  bool top = p.row <= 5;
  bool left = p.col <= 5;
  if (top) return left ? Quadrant::NW : Quadrant::NE;
  return left ? Quadrant::SW : Quadrant::SE;
}

BoardHalf half_of(Pos p) { return p.row <= 5 ? BoardHalf::Top : BoardHalf::Bottom; }

int region_cell_count(Quadrant q) {
  switch (q) {
    case Quadrant::NW: return 6 * 6;
    case Quadrant::NE: return 6 * 5;
    case Quadrant::SW: return 5 * 6;
    case Quadrant::SE: return 5 * 5;
    default: return 0;
  }
}

int region_cell_count(BoardHalf h) { return h == BoardHalf::Top ? 6 * 11 : 5 * 11; }

bool pos_in_region(Pos p, Quadrant q) { return q != Quadrant::Unknown && quadrant_of(p) == q; }

bool pos_in_region(Pos p, BoardHalf h) { return half_of(p) == h; }

CoarseInfo summarize(const RawObservation& obs) {
  CoarseInfo info;
  info.self_half = half_of(obs.pos);
  int enemy_team = 1 - team_of(obs.agent_id);
  int first = enemy_team == 0 ? 0 : 1;  // opponents are {first, first+2}
  std::array<Quadrant, 2> q = {Quadrant::Unknown, Quadrant::Unknown};
  for (int idx = 0; idx < kNumCells; ++idx) {
    const ObsCell& cell = obs.cells[idx];
    if (cell.fog || cell.agent_id < 0) continue;
    if (team_of(cell.agent_id) != enemy_team) continue;
    q[cell.agent_id == first ? 0 : 1] = quadrant_of(pos_of(idx));
  }
  info.enemy_a = q[0];
  info.enemy_b = q[1];
  return info;
}

int coarse_index(const CoarseInfo& info) {
  int a = static_cast<int>(info.enemy_a);
  int b = static_cast<int>(info.enemy_b);
  int h = static_cast<int>(info.self_half);
  return (a * 5 + b) * 2 + h;
}

CoarseInfo coarse_from_index(int index) {
  CoarseInfo info;
  info.self_half = static_cast<BoardHalf>(index & 1);
  int ab = index >> 1;
  info.enemy_a = static_cast<Quadrant>(ab / 5);
  info.enemy_b = static_cast<Quadrant>(ab % 5);
  return info;
}

Message encode_message(const CoarseInfo& info) {
  int index = coarse_index(info);
  return Message{static_cast<uint8_t>(index / 8 + 1), static_cast<uint8_t>(index % 8 + 1)};
}

std::optional<CoarseInfo> decode_message(Message msg) {
  if (msg.word1 < 1 || msg.word1 > 8 || msg.word2 < 1 || msg.word2 > 8) return std::nullopt;
  int index = (msg.word1 - 1) * 8 + (msg.word2 - 1);
  if (index >= kCoarseInfoCount) return std::nullopt;
  return coarse_from_index(index);
}

}  // namespace teamradio

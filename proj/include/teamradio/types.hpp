// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_TYPES_HPP_
#define TEAMRADIO_TYPES_HPP_

#include <array>
#include <cstdint>

#include "teamradio/fixed_vec.hpp"

namespace teamradio {

inline constexpr int kBoardSize = 11;
inline constexpr int kNumCells = kBoardSize * kBoardSize;
inline constexpr int kNumAgents = 4;
inline constexpr int kNumActions = 6;
inline constexpr int kMaxBombs = 64;

enum class Action : uint8_t { Stop = 0, Up, Down, Left, Right, Bomb };

enum class TileKind : uint8_t { Passage = 0, Rigid, Wood };

enum class Powerup : uint8_t { None = 0, ExtraBomb, IncrRange, Kick };

enum class GameResult : uint8_t { Ongoing = 0, Team0Win, Team1Win, Tie };

struct Pos {
  int8_t row = 0;
  int8_t col = 0;
  friend bool operator==(Pos a, Pos b) { return a.row == b.row && a.col == b.col; }
};

inline bool in_bounds(int row, int col) {
  return row >= 0 && row < kBoardSize && col >= 0 && col < kBoardSize;
}
inline bool in_bounds(Pos p) { return in_bounds(p.row, p.col); }
inline int cell_index(int row, int col) { return row * kBoardSize + col; }
inline int cell_index(Pos p) { return cell_index(p.row, p.col); }
inline Pos pos_of(int index) {
  return Pos{static_cast<int8_t>(index / kBoardSize), static_cast<int8_t>(index % kBoardSize)};
}

// Row/col delta of a movement action. Stop/Bomb map to (0,0).
inline Pos action_delta(Action a) {
  switch (a) {
    case Action::Up: return Pos{-1, 0};
    case Action::Down: return Pos{1, 0};
    case Action::Left: return Pos{0, -1};
    case Action::Right: return Pos{0, 1};
    default: return Pos{0, 0};
  }
}

inline Pos offset(Pos p, Pos d) {
  return Pos{static_cast<int8_t>(p.row + d.row), static_cast<int8_t>(p.col + d.col)};
}

inline bool is_movement(Action a) {
  return a == Action::Up || a == Action::Down || a == Action::Left || a == Action::Right;
}

// Two integers in 1..8. {0,0} means "no message".
struct Message {
  uint8_t word1 = 0;
  uint8_t word2 = 0;
  bool present() const { return word1 != 0; }
  friend bool operator==(Message a, Message b) {
    return a.word1 == b.word1 && a.word2 == b.word2;
  }
};

inline constexpr Message kNoMessage{0, 0};

inline int teammate_of(int agent_id) { return (agent_id + 2) % kNumAgents; }
inline int team_of(int agent_id) { return agent_id % 2; }

struct ActionMask {
  std::array<bool, kNumActions> allowed{};
  bool operator[](Action a) const { return allowed[static_cast<int>(a)]; }
  bool& at(Action a) { return allowed[static_cast<int>(a)]; }
  int count() const {
    int n = 0;
    for (bool b : allowed) n += b ? 1 : 0;
    return n;
  }
  uint8_t bits() const {
    uint8_t v = 0;
    for (int i = 0; i < kNumActions; ++i)
      if (allowed[i]) v |= static_cast<uint8_t>(1u << i);
    return v;
  }
  static ActionMask from_bits(uint8_t v) {
    ActionMask m;
    for (int i = 0; i < kNumActions; ++i) m.allowed[i] = (v >> i) & 1u;
    return m;
  }
  static ActionMask all_allowed() {
    ActionMask m;
    m.allowed.fill(true);
    return m;
  }
};

}  // namespace teamradio

#endif  // TEAMRADIO_TYPES_HPP_

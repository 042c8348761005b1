// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_PERCEPT_HPP_
#define TEAMRADIO_PERCEPT_HPP_

#include <array>
#include <cstdint>
#include <optional>

#include "teamradio/engine.hpp"
#include "teamradio/radio.hpp"
#include "teamradio/types.hpp"

namespace teamradio {

inline constexpr int kObsChannels = 33;
inline constexpr int kObsValues = kObsChannels * kNumCells;
inline constexpr int kBeliefWindow = 50;  // ticks before a record is evicted

// Channel map. The policy input is channel-major: value(c, cell).
//  0-8   board one-hots: passage, rigid, wood, bomb, flame, fog,
//        extra-bomb, incr-range, kick powerups
//  9     bias plane (all ones)
//  10-11 bomb life remaining / blast strength at visible bomb cells
//  12-15 agent position planes by agent id: own exact; others exact from
//        sight, else uniform mass over the radioed quadrant/half, else zero
//  16-18 alive flags of agents (self+1)%4, (self+2)%4, (self+3)%4 — constant
//        planes; 17 is always the teammate
//  19-21 own ammo, blast strength, kick — constant planes
//  22    tick — constant plane
//  23-31 belief mirror of 0-8: current truth at visible cells, last-seen
//        record under fog, zero where unknown (31... 28, the fog mirror, is
//        therefore always zero)
//  32    belief validity plane: 1 where the cell is visible or remembered
enum ObsChannel : int {
  kChPassage = 0,
  kChRigid = 1,
  kChWood = 2,
  kChBomb = 3,
  kChFlame = 4,
  kChFog = 5,
  kChPowExtraBomb = 6,
  kChPowIncrRange = 7,
  kChPowKick = 8,
  kChBias = 9,
  kChBombLife = 10,
  kChBombStrength = 11,
  kChAgentPos0 = 12,
  kChAliveFirst = 16,
  kChOwnAmmo = 19,
  kChOwnBlast = 20,
  kChOwnKick = 21,
  kChTick = 22,
  kChBeliefFirst = 23,
  kChBeliefValid = 32,
};

struct EncodedObservation {
  std::array<float, kObsValues> v{};
  float at(int channel, int cell) const { return v[channel * kNumCells + cell]; }
  float at(int channel, Pos p) const { return at(channel, cell_index(p)); }
  float* channel(int c) { return v.data() + c * kNumCells; }
  const float* channel(int c) const { return v.data() + c * kNumCells; }
};

// Per-cell memory of board features seen in the last kBeliefWindow ticks.
// Agent positions are never stored; an occupied cell records its tile.
class BeliefState {
 public:
  struct Record {
    uint8_t bits = 0;  // bit per channel 0-8 minus fog, see kBit* below
    uint16_t seen_tick = 0;
    bool seen = false;
  };
  static constexpr uint8_t kBitPassage = 1u << 0;
  static constexpr uint8_t kBitRigid = 1u << 1;
  static constexpr uint8_t kBitWood = 1u << 2;
  static constexpr uint8_t kBitBomb = 1u << 3;
  static constexpr uint8_t kBitFlame = 1u << 4;
  static constexpr uint8_t kBitExtraBomb = 1u << 5;
  static constexpr uint8_t kBitIncrRange = 1u << 6;
  static constexpr uint8_t kBitKick = 1u << 7;

  void update(const RawObservation& obs, int tick);
  // Valid at `tick` iff seen within the window.
  bool known(int cell, int tick) const {
    const Record& r = cells_[cell];
    return r.seen && tick - r.seen_tick <= kBeliefWindow;
  }
  uint8_t bits(int cell) const { return cells_[cell].bits; }
  void reset() { cells_.fill(Record{}); }

 private:
  std::array<Record, kNumCells> cells_{};
};

struct EncodeOptions {
  bool no_comm = false;    // drop the inbox message
  bool no_belief = false;  // zero channels 23-32
};

// Pure function of its inputs. `msg` is normally obs.inbox; reserved radio
// codes decode to "no information".
EncodedObservation encode(const RawObservation& obs, const BeliefState& belief,
                          std::optional<Message> msg, const EngineConfig& cfg,
                          const EncodeOptions& opts = {});

}  // namespace teamradio

#endif  // TEAMRADIO_PERCEPT_HPP_

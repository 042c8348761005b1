// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_ENGINE_HPP_
#define TEAMRADIO_ENGINE_HPP_

#include <array>
#include <cstdint>
#include <string>

#include "teamradio/config.hpp"
#include "teamradio/fixed_vec.hpp"
#include "teamradio/types.hpp"

namespace teamradio {

struct Tile {
  TileKind kind = TileKind::Passage;
  Powerup hidden = Powerup::None;   // revealed when the wood burns
  Powerup visible = Powerup::None;  // walk on it to pick it up
  friend bool operator==(const Tile& a, const Tile& b) {
    return a.kind == b.kind && a.hidden == b.hidden && a.visible == b.visible;
  }
};

struct AgentState {
  uint8_t id = 0;
  uint8_t team = 0;
  Pos pos{};
  bool alive = true;
  uint8_t ammo = 1;
  uint8_t blast_strength = 3;
  bool can_kick = false;
  Message inbox = kNoMessage;  // teammate's message from the previous tick
  friend bool operator==(const AgentState& a, const AgentState& b) {
    return a.id == b.id && a.team == b.team && a.pos == b.pos && a.alive == b.alive &&
           a.ammo == b.ammo && a.blast_strength == b.blast_strength &&
           a.can_kick == b.can_kick && a.inbox == b.inbox;
  }
};

struct Bomb {
  Pos pos{};
  uint8_t owner = 0;
  uint8_t life = 10;
  uint8_t blast_strength = 3;
  int8_t dir = -1;  // Action value while sliding after a kick, -1 when at rest
  uint8_t moved_this_tick = 0;
  friend bool operator==(const Bomb& a, const Bomb& b) {
    return a.pos == b.pos && a.owner == b.owner && a.life == b.life &&
           a.blast_strength == b.blast_strength && a.dir == b.dir;
  }
};

struct Flame {
  Pos pos{};
  uint8_t life = 2;
  friend bool operator==(const Flame& a, const Flame& b) {
    return a.pos == b.pos && a.life == b.life;
  }
};

// Full ground truth for one game. Trivially copyable by design: the guard
// module copies states thousands of times per decision.
struct GameState {
  std::array<Tile, kNumCells> grid{};
  std::array<AgentState, kNumAgents> agents{};
  FixedVec<Bomb, kMaxBombs> bombs;
  FixedVec<Flame, kNumCells> flames;  // at most one per cell
  uint16_t tick = 0;
  GameResult result = GameResult::Ongoing;
  uint64_t rng_seed = 0;

  const Tile& tile(Pos p) const { return grid[cell_index(p)]; }
  Tile& tile(Pos p) { return grid[cell_index(p)]; }
  const Bomb* bomb_at(Pos p) const;
  const Flame* flame_at(Pos p) const;
  // Alive agent occupying p, or -1.
  int agent_at(Pos p) const;
  bool team_alive(int team) const;

  friend bool operator==(const GameState& a, const GameState& b) {
    return a.grid == b.grid && a.agents == b.agents && a.bombs == b.bombs &&
           a.flames == b.flames && a.tick == b.tick && a.result == b.result &&
           a.rng_seed == b.rng_seed;
  }
};

struct ObsCell {
  bool fog = true;
  TileKind kind = TileKind::Passage;
  Powerup powerup = Powerup::None;
  bool has_bomb = false;
  uint8_t bomb_life = 0;
  uint8_t bomb_blast_strength = 0;
  int8_t bomb_dir = -1;
  bool has_flame = false;
  uint8_t flame_life = 0;
  int8_t agent_id = -1;
};

// One agent's fogged view plus its own meta state and inbox.
struct RawObservation {
  std::array<ObsCell, kNumCells> cells{};
  uint8_t agent_id = 0;
  uint8_t team = 0;
  Pos pos{};
  bool self_alive = true;
  uint8_t ammo = 0;
  uint8_t blast_strength = 0;
  bool can_kick = false;
  std::array<bool, kNumAgents> alive{};
  uint16_t tick = 0;
  Message inbox = kNoMessage;  // absent when the teammate is dead

  const ObsCell& cell(Pos p) const { return cells[cell_index(p)]; }
};

enum class EventKind : uint8_t {
  BombPlaced,
  BombExploded,
  WoodDestroyed,
  PowerupRevealed,
  PowerupPicked,
  PowerupDestroyed,
  AgentDied,
  BombKicked,
};

struct Event {
  EventKind kind;
  Pos pos;
  int8_t agent = -1;  // owner / victim / picker where it applies
};

using EventList = std::vector<Event>;

// Board generation: diagonally symmetric tile kinds, agents at the four
// corners (teammates diagonally opposite), corner-connectivity through
// Passage+Wood guaranteed by regeneration. Deterministic in `seed`.
GameState generate_board(uint64_t seed, const EngineConfig& cfg);

// Advances one tick. Throws std::logic_error if the game already ended.
// messages[i] is what agent i transmits this tick; it lands in the teammate's
// inbox and is readable from the next tick's observation.
EventList step(GameState& state, const std::array<Action, kNumAgents>& actions,
               const std::array<Message, kNumAgents>& messages, const EngineConfig& cfg);

// step without the result precondition and without touching result/tick
// bookkeeping differently — used by lookahead code that simulates past a
// hypothetical game end. Identical dynamics.
EventList step_unchecked(GameState& state, const std::array<Action, kNumAgents>& actions,
                         const std::array<Message, kNumAgents>& messages,
                         const EngineConfig& cfg);

RawObservation observe(const GameState& state, int agent_id, const EngineConfig& cfg);

// +1 if the agent's team won, -1 otherwise (ties included).
// Throws std::logic_error on an ongoing game.
int env_reward(const GameState& state, int agent_id);

// 64-bit FNV-1a over the canonical byte encoding; replay verification currency.
uint64_t state_hash(const GameState& state);

std::string render_ascii(const GameState& state);

}  // namespace teamradio

#endif  // TEAMRADIO_ENGINE_HPP_

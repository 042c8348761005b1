// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/engine.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "teamradio/rng.hpp"

namespace teamradio {

namespace {

constexpr std::array<Pos, 4> kSpawns = {Pos{0, 0}, Pos{10, 0}, Pos{10, 10}, Pos{0, 10}};

// Cells kept clear so every agent can leave its corner in both directions.
bool is_protected_cell(int r, int c) {
  for (Pos s : kSpawns) {
    int dr = std::abs(r - s.row);
    int dc = std::abs(c - s.col);
    if ((dr == 0 && dc <= 2) || (dc == 0 && dr <= 2)) return true;
  }
  return false;
}

// Places `count` tiles of `kind`, mirrored across the main diagonal.
// Returns false when the exact count cannot be hit with the remaining cells.
bool place_symmetric(GameState& st, Rng& rng, TileKind kind, int count) {
  std::vector<int> diag, pairs;  // pairs keyed by index with row < col
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = r; c < kBoardSize; ++c) {
      if (is_protected_cell(r, c) || is_protected_cell(c, r)) continue;
      if (st.grid[cell_index(r, c)].kind != TileKind::Passage) continue;
      if (st.grid[cell_index(c, r)].kind != TileKind::Passage) continue;
      if (r == c)
        diag.push_back(cell_index(r, c));
      else
        pairs.push_back(cell_index(r, c));
    }
  }
  rng.shuffle(diag.data(), diag.size());
  rng.shuffle(pairs.data(), pairs.size());
  std::size_t di = 0, pi = 0;
  int remaining = count;
  while (remaining > 0) {
    if (remaining >= 2 && pi < pairs.size()) {
      Pos p = pos_of(pairs[pi++]);
      st.grid[cell_index(p.row, p.col)].kind = kind;
      st.grid[cell_index(p.col, p.row)].kind = kind;
      remaining -= 2;
    } else if (di < diag.size()) {
      st.grid[diag[di++]].kind = kind;
      remaining -= 1;
    } else {
      return false;
    }
  }
  return true;
}

bool place_powerups_symmetric(GameState& st, Rng& rng, int count) {
  std::vector<int> diag, pairs;
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = r; c < kBoardSize; ++c) {
      if (st.grid[cell_index(r, c)].kind != TileKind::Wood) continue;
      if (r == c)
        diag.push_back(cell_index(r, c));
      else
        pairs.push_back(cell_index(r, c));
    }
  }
  rng.shuffle(diag.data(), diag.size());
  rng.shuffle(pairs.data(), pairs.size());
  std::size_t di = 0, pi = 0;
  int remaining = count;
  while (remaining > 0) {
    Powerup kind = static_cast<Powerup>(1 + rng.below(3));
    if (remaining >= 2 && pi < pairs.size()) {
      Pos p = pos_of(pairs[pi++]);
      st.grid[cell_index(p.row, p.col)].hidden = kind;
      st.grid[cell_index(p.col, p.row)].hidden = kind;
      remaining -= 2;
    } else if (di < diag.size()) {
      st.grid[diag[di++]].hidden = kind;
      remaining -= 1;
    } else {
      return false;
    }
  }
  return true;
}

bool corners_connected(const GameState& st) {
  // Flood fill over Passage+Wood from (0,0); all four corners must be in one
  // component. Connectivity is symmetric, so pairwise follows.
  std::array<bool, kNumCells> seen{};
  std::array<int, kNumCells> stack;
  int top = 0;
  stack[top++] = 0;
  seen[0] = true;
  while (top > 0) {
    int idx = stack[--top];
    Pos p = pos_of(idx);
    const Pos deltas[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    for (Pos d : deltas) {
      Pos q = offset(p, d);
      if (!in_bounds(q)) continue;
      int qi = cell_index(q);
      if (seen[qi]) continue;
      if (st.grid[qi].kind == TileKind::Rigid) continue;
      seen[qi] = true;
      stack[top++] = qi;
    }
  }
  for (Pos s : kSpawns)
    if (!seen[cell_index(s)]) return false;
  return true;
}

int bomb_index_at(const GameState& st, Pos p) {
  for (std::size_t i = 0; i < st.bombs.size(); ++i)
    if (st.bombs[i].pos == p) return static_cast<int>(i);
  return -1;
}

bool bomb_can_enter(const GameState& st, Pos p) {
  if (!in_bounds(p)) return false;
  const Tile& t = st.tile(p);
  if (t.kind != TileKind::Passage || t.visible != Powerup::None) return false;
  if (bomb_index_at(st, p) >= 0) return false;
  if (st.agent_at(p) >= 0) return false;
  return true;
}

void add_flame(GameState& st, Pos p, uint8_t life) {
  for (std::size_t i = 0; i < st.flames.size(); ++i) {
    if (st.flames[i].pos == p) {
      st.flames[i].life = std::max(st.flames[i].life, life);
      return;
    }
  }
  st.flames.push_back(Flame{p, life});
}

// Cells covered by one bomb's blast: the bomb cell plus rays in the four
// cardinal directions, length blast_strength-1, stopping before rigid walls
// and consuming (including) the first wooden wall.
void blast_cells(const GameState& st, const Bomb& b, std::array<bool, kNumCells>& out) {
  out[cell_index(b.pos)] = true;
  const Pos deltas[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  for (Pos d : deltas) {
    Pos q = b.pos;
    for (int k = 1; k < b.blast_strength; ++k) {
      q = offset(q, d);
      if (!in_bounds(q)) break;
      const Tile& t = st.tile(q);
      if (t.kind == TileKind::Rigid) break;
      out[cell_index(q)] = true;
      if (t.kind == TileKind::Wood) break;
    }
  }
}

}  // namespace

const Bomb* GameState::bomb_at(Pos p) const {
  int i = bomb_index_at(*this, p);
  return i < 0 ? nullptr : &bombs[i];
}

const Flame* GameState::flame_at(Pos p) const {
  for (std::size_t i = 0; i < flames.size(); ++i)
    if (flames[i].pos == p) return &flames[i];
  return nullptr;
}

int GameState::agent_at(Pos p) const {
  for (const AgentState& a : agents)
    if (a.alive && a.pos == p) return a.id;
  return -1;
}

bool GameState::team_alive(int team) const {
  for (const AgentState& a : agents)
    if (a.alive && a.team == team) return true;
  return false;
}

GameState generate_board(uint64_t seed, const EngineConfig& cfg) {
  Rng rng(derive_seed(seed, 0x0b0a12d));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    GameState st;
    st.rng_seed = seed;
    for (int i = 0; i < kNumAgents; ++i) {
      AgentState& a = st.agents[i];
      a.id = static_cast<uint8_t>(i);
      a.team = static_cast<uint8_t>(team_of(i));
      a.pos = kSpawns[i];
      a.alive = true;
      a.ammo = static_cast<uint8_t>(cfg.initial_ammo);
      a.blast_strength = static_cast<uint8_t>(cfg.initial_blast);
      a.can_kick = false;
      a.inbox = kNoMessage;
    }
    if (!place_symmetric(st, rng, TileKind::Rigid, cfg.rigid_count)) continue;
    if (!place_symmetric(st, rng, TileKind::Wood, cfg.wood_count)) continue;
    if (!place_powerups_symmetric(st, rng, cfg.powerup_count)) continue;
    if (!corners_connected(st)) continue;
    return st;
  }
  throw std::runtime_error("generate_board: no valid board found (config too dense?)");
}

EventList step(GameState& state, const std::array<Action, kNumAgents>& actions,
               const std::array<Message, kNumAgents>& messages, const EngineConfig& cfg) {
  if (state.result != GameResult::Ongoing)
    throw std::logic_error("step: game already finished");
  return step_unchecked(state, actions, messages, cfg);
}

EventList step_unchecked(GameState& state, const std::array<Action, kNumAgents>& actions,
                         const std::array<Message, kNumAgents>& messages,
                         const EngineConfig& cfg) {
  EventList events;
  std::array<bool, kNumAgents> was_alive;
  for (int i = 0; i < kNumAgents; ++i) was_alive[i] = state.agents[i].alive;

  // 1. Flames age out.
  for (std::size_t i = state.flames.size(); i-- > 0;) {
    if (--state.flames[i].life == 0) state.flames.erase_at(i);
  }

  // 2. Bomb placement. Requires ammo and a bomb-free own cell; otherwise the
  // action degrades to Stop.
  for (int i = 0; i < kNumAgents; ++i) {
    AgentState& a = state.agents[i];
    if (!a.alive || actions[i] != Action::Bomb) continue;
    if (a.ammo == 0 || bomb_index_at(state, a.pos) >= 0) continue;
    if (state.bombs.size() >= state.bombs.capacity()) continue;
    Bomb b;
    b.pos = a.pos;
    b.owner = a.id;
    b.life = static_cast<uint8_t>(cfg.bomb_life);
    b.blast_strength = a.blast_strength;
    state.bombs.push_back(b);
    --a.ammo;
    events.push_back(Event{EventKind::BombPlaced, a.pos, static_cast<int8_t>(i)});
  }

  // 3. Movement: simultaneous with bounce-back conflicts resolved to a fixed
  // point. Same-target and swap conflicts bounce everyone involved; kicks are
  // validated inside the loop so a cancelled kick re-enters resolution.
  std::array<Pos, kNumAgents> desired;
  std::array<bool, kNumAgents> wants_kick{};
  std::array<Pos, kNumAgents> kick_to{};  // bomb's destination cell
  for (int i = 0; i < kNumAgents; ++i) {
    AgentState& a = state.agents[i];
    desired[i] = a.pos;
    if (!a.alive || !is_movement(actions[i])) continue;
    Pos d = action_delta(actions[i]);
    Pos target = offset(a.pos, d);
    if (!in_bounds(target) || state.tile(target).kind != TileKind::Passage) continue;
    if (bomb_index_at(state, target) >= 0) {
      Pos beyond = offset(target, d);
      if (a.can_kick && bomb_can_enter(state, beyond)) {
        desired[i] = target;
        wants_kick[i] = true;
        kick_to[i] = beyond;
      }
      continue;  // bounce without kick
    }
    desired[i] = target;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < kNumAgents; ++i) {
      if (!state.agents[i].alive || desired[i] == state.agents[i].pos) continue;
      for (int j = 0; j < kNumAgents; ++j) {
        if (j == i || !state.agents[j].alive) continue;
        bool same_target = desired[j] == desired[i];
        bool swap = desired[i] == state.agents[j].pos && desired[j] == state.agents[i].pos;
        if (same_target || swap) {
          if (desired[i] == state.agents[i].pos) break;
          desired[i] = state.agents[i].pos;
          wants_kick[i] = false;
          if (desired[j] == state.agents[j].pos) { changed = true; break; }
          desired[j] = state.agents[j].pos;
          wants_kick[j] = false;
          changed = true;
        }
      }
    }
    // A kick is off when the bomb's destination is claimed by an agent or by
    // another kicked bomb.
    for (int i = 0; i < kNumAgents; ++i) {
      if (!wants_kick[i]) continue;
      bool blocked = false;
      for (int j = 0; j < kNumAgents && !blocked; ++j) {
        if (j == i || !state.agents[j].alive) continue;
        if (desired[j] == kick_to[i]) blocked = true;
        if (wants_kick[j] && kick_to[j] == kick_to[i]) blocked = true;
      }
      if (blocked) {
        desired[i] = state.agents[i].pos;
        wants_kick[i] = false;
        changed = true;
      }
    }
  }
  for (int i = 0; i < kNumAgents; ++i) {
    AgentState& a = state.agents[i];
    if (!a.alive) continue;
    if (wants_kick[i]) {
      int bi = bomb_index_at(state, desired[i]);
      if (bi >= 0) {
        state.bombs[bi].pos = kick_to[i];
        state.bombs[bi].dir = static_cast<int8_t>(actions[i]);
        state.bombs[bi].moved_this_tick = 1;
        events.push_back(Event{EventKind::BombKicked, kick_to[i], static_cast<int8_t>(i)});
      }
    }
    a.pos = desired[i];
  }

  // 4. Bombs in motion slide one cell; obstacles stop them for good.
  for (std::size_t bi = 0; bi < state.bombs.size(); ++bi) {
    Bomb& b = state.bombs[bi];
    if (b.dir < 0) continue;
    if (b.moved_this_tick) {
      b.moved_this_tick = 0;
      continue;
    }
    Pos d = action_delta(static_cast<Action>(b.dir));
    Pos target = offset(b.pos, d);
    if (bomb_can_enter(state, target))
      b.pos = target;
    else
      b.dir = -1;
  }

  // 5. Fuses tick down; explosions chain to a fixed point. A bomb sitting on a
  // live flame detonates as well.
  std::array<bool, kMaxBombs> exploding{};
  bool any = false;
  for (std::size_t i = 0; i < state.bombs.size(); ++i) {
    Bomb& b = state.bombs[i];
    if (b.life > 0) --b.life;
    if (b.life == 0 || state.flame_at(b.pos) != nullptr) {
      exploding[i] = true;
      any = true;
    }
  }
  std::array<bool, kNumCells> blast{};
  if (any) {
    bool grew = true;
    while (grew) {
      grew = false;
      blast.fill(false);
      for (std::size_t i = 0; i < state.bombs.size(); ++i)
        if (exploding[i]) blast_cells(state, state.bombs[i], blast);
      for (std::size_t i = 0; i < state.bombs.size(); ++i) {
        if (!exploding[i] && blast[cell_index(state.bombs[i].pos)]) {
          exploding[i] = true;
          grew = true;
        }
      }
    }
    // 6. Apply the blast: remove bombs (ammo returns to owners), burn wood,
    // reveal/destroy powerups, lay flames.
    for (std::size_t i = state.bombs.size(); i-- > 0;) {
      if (!exploding[i]) continue;
      const Bomb b = state.bombs[i];
      events.push_back(Event{EventKind::BombExploded, b.pos, static_cast<int8_t>(b.owner)});
      ++state.agents[b.owner].ammo;
      state.bombs.erase_at(i);
    }
    for (int idx = 0; idx < kNumCells; ++idx) {
      if (!blast[idx]) continue;
      Tile& t = state.grid[idx];
      if (t.kind == TileKind::Wood) {
        t.kind = TileKind::Passage;
        events.push_back(Event{EventKind::WoodDestroyed, pos_of(idx), -1});
        if (t.hidden != Powerup::None) {
          t.visible = t.hidden;
          t.hidden = Powerup::None;
          events.push_back(Event{EventKind::PowerupRevealed, pos_of(idx), -1});
        }
      } else if (t.visible != Powerup::None) {
        t.visible = Powerup::None;
        events.push_back(Event{EventKind::PowerupDestroyed, pos_of(idx), -1});
      }
      add_flame(state, pos_of(idx), static_cast<uint8_t>(cfg.flame_life));
    }
  }

  // 7. Flames kill.
  for (AgentState& a : state.agents) {
    if (a.alive && state.flame_at(a.pos) != nullptr) {
      a.alive = false;
      events.push_back(Event{EventKind::AgentDied, a.pos, static_cast<int8_t>(a.id)});
    }
  }

  // 8. Survivors pick up what they stand on.
  for (AgentState& a : state.agents) {
    if (!a.alive) continue;
    Tile& t = state.tile(a.pos);
    if (t.visible == Powerup::None) continue;
    switch (t.visible) {
      case Powerup::ExtraBomb: ++a.ammo; break;
      case Powerup::IncrRange: ++a.blast_strength; break;
      case Powerup::Kick: a.can_kick = true; break;
      default: break;
    }
    t.visible = Powerup::None;
    events.push_back(Event{EventKind::PowerupPicked, a.pos, static_cast<int8_t>(a.id)});
  }

  // 9. Radio: a message sent this tick lands in the teammate's inbox and is
  // readable from the next observation.
  for (int i = 0; i < kNumAgents; ++i) {
    if (was_alive[i] && messages[i].present())
      state.agents[teammate_of(i)].inbox = messages[i];
  }

  // 10. Clock and result.
  ++state.tick;
  bool t0 = state.team_alive(0);
  bool t1 = state.team_alive(1);
  if (!t0 && !t1)
    state.result = GameResult::Tie;
  else if (!t1)
    state.result = GameResult::Team0Win;
  else if (!t0)
    state.result = GameResult::Team1Win;
  else if (state.tick >= cfg.max_ticks)
    state.result = GameResult::Tie;
  return events;
}

RawObservation observe(const GameState& state, int agent_id, const EngineConfig& cfg) {
  const AgentState& self = state.agents[agent_id];
  RawObservation obs;
  obs.agent_id = self.id;
  obs.team = self.team;
  obs.pos = self.pos;
  obs.self_alive = self.alive;
  obs.ammo = self.ammo;
  obs.blast_strength = self.blast_strength;
  obs.can_kick = self.can_kick;
  obs.tick = state.tick;
  for (int i = 0; i < kNumAgents; ++i) obs.alive[i] = state.agents[i].alive;
  obs.inbox = state.agents[teammate_of(agent_id)].alive ? self.inbox : kNoMessage;

  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      ObsCell& cell = obs.cells[cell_index(r, c)];
      if (std::max(std::abs(r - self.pos.row), std::abs(c - self.pos.col)) > cfg.view_radius)
        continue;  // stays fog
      Pos p{static_cast<int8_t>(r), static_cast<int8_t>(c)};
      const Tile& t = state.tile(p);
      cell.fog = false;
      cell.kind = t.kind;
      cell.powerup = t.visible;
      if (const Bomb* b = state.bomb_at(p)) {
        cell.has_bomb = true;
        cell.bomb_life = b->life;
        cell.bomb_blast_strength = b->blast_strength;
        cell.bomb_dir = b->dir;
      }
      if (const Flame* f = state.flame_at(p)) {
        cell.has_flame = true;
        cell.flame_life = f->life;
      }
      cell.agent_id = static_cast<int8_t>(state.agent_at(p));
    }
  }
  return obs;
}

int env_reward(const GameState& state, int agent_id) {
  if (state.result == GameResult::Ongoing)
    throw std::logic_error("env_reward: game still ongoing");
  int team = state.agents[agent_id].team;
  if ((state.result == GameResult::Team0Win && team == 0) ||
      (state.result == GameResult::Team1Win && team == 1))
    return 1;
  return -1;
}

uint64_t state_hash(const GameState& state) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const Tile& t : state.grid)
    mix((uint64_t)t.kind | ((uint64_t)t.hidden << 8) | ((uint64_t)t.visible << 16));
  // Inboxes are deliberately not hashed: replays log the radio team's
  // messages only, and messages never influence the dynamics.
  for (const AgentState& a : state.agents) {
    mix((uint64_t)a.id | ((uint64_t)a.team << 4) | ((uint64_t)a.alive << 8) |
        ((uint64_t)(uint8_t)a.pos.row << 16) | ((uint64_t)(uint8_t)a.pos.col << 24) |
        ((uint64_t)a.ammo << 32) | ((uint64_t)a.blast_strength << 40) |
        ((uint64_t)a.can_kick << 48));
  }
  mix(state.bombs.size());
  for (const Bomb& b : state.bombs)
    mix((uint64_t)(uint8_t)b.pos.row | ((uint64_t)(uint8_t)b.pos.col << 8) |
        ((uint64_t)b.owner << 16) | ((uint64_t)b.life << 24) |
        ((uint64_t)b.blast_strength << 32) | ((uint64_t)(uint8_t)b.dir << 40));
  mix(state.flames.size());
  for (const Flame& f : state.flames)
    mix((uint64_t)(uint8_t)f.pos.row | ((uint64_t)(uint8_t)f.pos.col << 8) |
        ((uint64_t)f.life << 16));
  mix(state.tick);
  mix((uint64_t)state.result);
  return h;
}

std::string render_ascii(const GameState& state) {
  // One char per cell; agents overlay bombs overlay flames overlay tiles.
  std::ostringstream out;
  out << "tick " << state.tick << " result " << static_cast<int>(state.result) << "\n";
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      Pos p{static_cast<int8_t>(r), static_cast<int8_t>(c)};
      char ch = '.';
      const Tile& t = state.tile(p);
      if (t.kind == TileKind::Rigid) ch = '#';
      if (t.kind == TileKind::Wood) ch = '+';
      if (t.visible == Powerup::ExtraBomb) ch = 'a';
      if (t.visible == Powerup::IncrRange) ch = 'r';
      if (t.visible == Powerup::Kick) ch = 'k';
      if (state.flame_at(p)) ch = '*';
      if (state.bomb_at(p)) ch = 'o';
      int agent = state.agent_at(p);
      if (agent >= 0) ch = static_cast<char>('0' + agent);
      out << ch;
    }
    out << "\n";
  }
  for (const AgentState& a : state.agents) {
    out << "agent " << int(a.id) << (a.alive ? " alive" : " dead ") << " ammo "
        << int(a.ammo) << " blast " << int(a.blast_strength) << " kick " << a.can_kick
        << "\n";
  }
  return out.str();
}

}  // namespace teamradio

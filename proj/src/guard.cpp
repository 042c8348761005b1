// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/guard.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace teamradio {

namespace {

constexpr int kMaxHorizon = 32;

struct Snapshot {
  std::array<bool, kNumCells> blocked{};  // rigid, wood, bomb, alive agent
  std::array<bool, kNumCells> flame{};
};

struct Timeline {
  int horizon = 0;
  std::array<Snapshot, kMaxHorizon + 1> at{};
};

void take_snapshot(const GameState& st, Snapshot& snap) {
  for (int i = 0; i < kNumCells; ++i) {
    TileKind k = st.grid[i].kind;
    snap.blocked[i] = k != TileKind::Passage;
  }
  for (const Bomb& b : st.bombs) snap.blocked[cell_index(b.pos)] = true;
  for (const AgentState& a : st.agents)
    if (a.alive) snap.blocked[cell_index(a.pos)] = true;
  for (const Flame& f : st.flames) snap.flame[cell_index(f.pos)] = true;
}

// Static-agent forward simulation of everything except the focal agent.
void simulate_timeline(GameState st, int focal, int horizon, const EngineConfig& cfg,
                       Timeline& tl) {
  st.agents[focal].alive = false;
  tl.horizon = horizon;
  take_snapshot(st, tl.at[0]);
  std::array<Action, kNumAgents> stop{};
  std::array<Message, kNumAgents> silent{};
  for (int t = 1; t <= horizon; ++t) {
    step_unchecked(st, stop, silent, cfg);
    st.result = GameResult::Ongoing;  // keep simulating past hypothetical ends
    take_snapshot(st, tl.at[t]);
  }
}

// Survival search over the precomputed timeline starting at `start`, which is
// occupied from time 1. Staying put is always possible (standing on a bomb is
// legal); entering a cell is checked against the board as it stands when the
// move is made, and arrival on a flame kills.
bool escapes(const Timeline& tl, Pos start) {
  if (tl.at[1].flame[cell_index(start)]) return false;
  if (tl.horizon <= 1) return true;
  std::array<std::array<bool, kNumCells>, kMaxHorizon + 1> visited{};
  std::vector<std::pair<int, int>> frontier;  // (cell, time)
  frontier.reserve(kNumCells);
  visited[1][cell_index(start)] = true;
  frontier.emplace_back(cell_index(start), 1);
  const Pos deltas[5] = {{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  while (!frontier.empty()) {
    auto [cell, t] = frontier.back();
    frontier.pop_back();
    if (t == tl.horizon) return true;
    Pos p = pos_of(cell);
    for (Pos d : deltas) {
      Pos q = offset(p, d);
      if (!in_bounds(q)) continue;
      int qi = cell_index(q);
      if (visited[t + 1][qi]) continue;
      if (qi != cell && tl.at[t].blocked[qi]) continue;
      if (tl.at[t + 1].flame[qi]) continue;
      visited[t + 1][qi] = true;
      frontier.emplace_back(qi, t + 1);
    }
  }
  return false;
}

// Rebuilds a game state from one agent's view. Fog becomes empty passage:
// unseen hazards do not exist for the filter.
GameState state_from_observation(const RawObservation& obs) {
  GameState st;
  st.tick = obs.tick;
  st.result = GameResult::Ongoing;
  for (int i = 0; i < kNumAgents; ++i) {
    AgentState& a = st.agents[i];
    a.id = static_cast<uint8_t>(i);
    a.team = static_cast<uint8_t>(team_of(i));
    a.alive = false;
  }
  for (int i = 0; i < kNumCells; ++i) {
    const ObsCell& cell = obs.cells[i];
    if (cell.fog) continue;
    st.grid[i].kind = cell.kind;
    st.grid[i].visible = cell.powerup;
    if (cell.has_bomb) {
      Bomb b;
      b.pos = pos_of(i);
      b.life = cell.bomb_life;
      b.blast_strength = cell.bomb_blast_strength;
      b.dir = cell.bomb_dir;
      b.owner = 0;  // refunds are irrelevant to the lookahead
      st.bombs.push_back(b);
    }
    if (cell.has_flame) st.flames.push_back(Flame{pos_of(i), cell.flame_life});
    if (cell.agent_id >= 0) {
      AgentState& a = st.agents[cell.agent_id];
      a.alive = true;
      a.pos = pos_of(i);
    }
  }
  AgentState& self = st.agents[obs.agent_id];
  self.alive = obs.self_alive;
  self.pos = obs.pos;
  self.ammo = obs.ammo;
  self.blast_strength = obs.blast_strength;
  self.can_kick = obs.can_kick;
  return st;
}

bool bomb_at(const GameState& st, Pos p) { return st.bomb_at(p) != nullptr; }

}  // namespace

GuardDecision compute_mask_detailed(const RawObservation& obs, const EngineConfig& cfg) {
  const int horizon = std::min(guard_horizon(cfg), kMaxHorizon);
  GameState model = state_from_observation(obs);
  const int focal = obs.agent_id;
  const Pos own = obs.pos;

  static thread_local Timeline background;
  simulate_timeline(model, focal, horizon, cfg, background);

  GuardDecision out;
  bool stop_safe = escapes(background, own);
  out.mask.at(Action::Stop) = stop_safe;

  for (Action a : {Action::Up, Action::Down, Action::Left, Action::Right}) {
    Pos target = offset(own, action_delta(a));
    bool legal = in_bounds(target) && model.tile(target).kind == TileKind::Passage &&
                 model.agent_at(target) < 0;
    if (legal && bomb_at(model, target)) {
      Pos beyond = offset(target, action_delta(a));
      bool kickable = obs.can_kick && in_bounds(beyond) &&
                      model.tile(beyond).kind == TileKind::Passage &&
                      model.tile(beyond).visible == Powerup::None &&
                      !bomb_at(model, beyond) && model.agent_at(beyond) < 0;
      if (!kickable) {
        out.mask.at(a) = false;
        continue;
      }
      // Kicks change the hazard layout; simulate the kick, then the fallout.
      GameState with_kick = model;
      std::array<Action, kNumAgents> acts{};
      acts[focal] = a;
      std::array<Message, kNumAgents> silent{};
      step_unchecked(with_kick, acts, silent, cfg);
      if (!with_kick.agents[focal].alive) {
        out.mask.at(a) = false;
        continue;
      }
      static thread_local Timeline kicked;
      Pos landed = with_kick.agents[focal].pos;
      with_kick.agents[focal].alive = false;
      kicked.horizon = horizon;
      take_snapshot(with_kick, kicked.at[1]);
      std::array<Action, kNumAgents> stop{};
      for (int t = 2; t <= horizon; ++t) {
        step_unchecked(with_kick, stop, silent, cfg);
        with_kick.result = GameResult::Ongoing;
        take_snapshot(with_kick, kicked.at[t]);
      }
      kicked.at[0] = background.at[0];
      out.mask.at(a) = escapes(kicked, landed);
      continue;
    }
    out.mask.at(a) = legal && escapes(background, target);
  }

  // Bomb. Without ammo (or on top of an existing bomb) it is a no-op and
  // shares Stop's fate. Otherwise it is vetoed when the agent already stands
  // in a blast line and the new bomb would remove every escape.
  bool can_place = obs.ammo > 0 && !bomb_at(model, own);
  if (!can_place) {
    out.mask.at(Action::Bomb) = stop_safe;
  } else {
    bool exposed = false;
    for (int t = 1; t <= horizon && !exposed; ++t)
      exposed = background.at[t].flame[cell_index(own)];
    if (!exposed) {
      out.mask.at(Action::Bomb) = true;
    } else {
      GameState with_bomb = model;
      Bomb b;
      b.pos = own;
      b.owner = static_cast<uint8_t>(focal);
      b.life = static_cast<uint8_t>(cfg.bomb_life);
      b.blast_strength = obs.blast_strength;
      with_bomb.bombs.push_back(b);
      static thread_local Timeline bombed;
      simulate_timeline(with_bomb, focal, horizon, cfg, bombed);
      out.mask.at(Action::Bomb) = escapes(bombed, own);
    }
  }

  if (out.mask.count() == 0) {
    out.mask = ActionMask::all_allowed();
    out.fallback_all_unsafe = true;
  }
  return out;
}

ActionMask compute_mask(const RawObservation& obs, const EngineConfig& cfg) {
  return compute_mask_detailed(obs, cfg).mask;
}

bool oracle_certain_death(const GameState& state, int agent_id, int horizon,
                          const EngineConfig& cfg) {
  horizon = std::min(horizon, kMaxHorizon);
  if (!state.agents[agent_id].alive) return true;

  // memo[depth][cell]: 0 unknown, 1 survives, 2 dies. Sound because the rest
  // of the world evolves independently of the focal agent's walk.
  static thread_local std::vector<uint8_t> memo;
  memo.assign(static_cast<std::size_t>(horizon + 1) * kNumCells, 0);

  struct Searcher {
    int agent;
    int horizon;
    const EngineConfig& cfg;
    std::vector<uint8_t>& memo;
    bool survives(const GameState& st, int depth) {
      if (!st.agents[agent].alive) return false;
      if (depth == horizon) return true;
      uint8_t& slot = memo[static_cast<std::size_t>(depth) * kNumCells +
                           cell_index(st.agents[agent].pos)];
      if (slot) return slot == 1;
      const Action options[5] = {Action::Stop, Action::Up, Action::Down, Action::Left,
                                 Action::Right};
      for (Action a : options) {
        GameState child = st;
        std::array<Action, kNumAgents> acts{};
        acts[agent] = a;
        std::array<Message, kNumAgents> silent{};
        step_unchecked(child, acts, silent, cfg);
        child.result = GameResult::Ongoing;
        if (survives(child, depth + 1)) {
          slot = 1;
          return true;
        }
      }
      slot = 2;
      return false;
    }
  } searcher{agent_id, horizon, cfg, memo};

  return !searcher.survives(state, 0);
}

}  // namespace teamradio

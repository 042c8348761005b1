// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/scripted.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "teamradio/guard.hpp"

namespace teamradio {

namespace {

const Pos kDirs[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
const Action kMoveActions[4] = {Action::Up, Action::Down, Action::Left, Action::Right};

struct View {
  std::array<bool, kNumCells> passable{};  // walkable for pathing
  std::array<bool, kNumCells> danger{};    // naive blast lines + flames
  std::array<int, kNumCells> dist{};       // BFS distance from self, -1 unreachable
  std::array<int8_t, kNumCells> first_step{};  // action leading onto shortest path
};

// Naive danger: every cell in the straight blast line of any visible bomb
// (walls cut the line) and every flame cell. Fuse timers are ignored.
void mark_danger(const RawObservation& obs, View& view) {
  for (int i = 0; i < kNumCells; ++i) {
    const ObsCell& cell = obs.cells[i];
    if (cell.fog) continue;
    if (cell.has_flame) view.danger[i] = true;
    if (!cell.has_bomb) continue;
    view.danger[i] = true;
    Pos origin = pos_of(i);
    for (Pos d : kDirs) {
      Pos q = origin;
      for (int k = 1; k < cell.bomb_blast_strength; ++k) {
        q = offset(q, d);
        if (!in_bounds(q)) break;
        const ObsCell& qc = obs.cells[cell_index(q)];
        if (!qc.fog && qc.kind != TileKind::Passage) break;
        view.danger[cell_index(q)] = true;
      }
    }
  }
}

void build_view(const RawObservation& obs, View& view) {
  for (int i = 0; i < kNumCells; ++i) {
    const ObsCell& cell = obs.cells[i];
    view.passable[i] = !cell.fog && cell.kind == TileKind::Passage && !cell.has_bomb &&
                       (cell.agent_id < 0 || cell.agent_id == obs.agent_id);
    view.dist[i] = -1;
    view.first_step[i] = -1;
  }
  mark_danger(obs, view);
  // BFS from self with deterministic expansion order; first_step remembers
  // which initial move reaches the cell on a shortest path.
  std::vector<int> queue;
  queue.reserve(kNumCells);
  int self = cell_index(obs.pos);
  view.dist[self] = 0;
  queue.push_back(self);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int cur = queue[head];
    Pos p = pos_of(cur);
    for (int d = 0; d < 4; ++d) {
      Pos q = offset(p, kDirs[d]);
      if (!in_bounds(q)) continue;
      int qi = cell_index(q);
      if (!view.passable[qi] || view.dist[qi] >= 0) continue;
      view.dist[qi] = view.dist[cur] + 1;
      view.first_step[qi] =
          cur == self ? static_cast<int8_t>(kMoveActions[d]) : view.first_step[cur];
      queue.push_back(qi);
    }
  }
}

bool adjacent_enemy(const RawObservation& obs) {
  // Chebyshev distance 1: diagonal contact counts.
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      Pos q{static_cast<int8_t>(obs.pos.row + dr), static_cast<int8_t>(obs.pos.col + dc)};
      if (!in_bounds(q)) continue;
      const ObsCell& cell = obs.cell(q);
      if (cell.fog || cell.agent_id < 0) continue;
      if (team_of(cell.agent_id) != team_of(obs.agent_id)) return true;
    }
  }
  return false;
}

bool adjacent_wood(const RawObservation& obs) {
  for (Pos d : kDirs) {
    Pos q = offset(obs.pos, d);
    if (!in_bounds(q)) continue;
    const ObsCell& cell = obs.cell(q);
    if (!cell.fog && cell.kind == TileKind::Wood) return true;
  }
  return false;
}

}  // namespace

const char* scripted_kind_name(ScriptedKind kind) {
  switch (kind) {
    case ScriptedKind::Static: return "static";
    case ScriptedKind::Simple: return "simple";
    case ScriptedKind::SmartSimple: return "smart_simple";
    case ScriptedKind::SmartSimpleNobomb: return "smart_simple_nobomb";
  }
  return "?";
}

bool parse_scripted_kind(const std::string& name, ScriptedKind* out) {
  for (ScriptedKind k : {ScriptedKind::Static, ScriptedKind::Simple, ScriptedKind::SmartSimple,
                         ScriptedKind::SmartSimpleNobomb}) {
    if (name == scripted_kind_name(k)) {
      *out = k;
      return true;
    }
  }
  return false;
}

ScriptedAgent::ScriptedAgent(ScriptedKind kind, uint64_t seed, const ScriptedConfig& scfg)
    : kind_(kind), rng_(seed), scfg_(scfg) {}

Action ScriptedAgent::act(const RawObservation& obs, const EngineConfig& cfg) {
  return act(obs, cfg, nullptr);
}

Action ScriptedAgent::act(const RawObservation& obs, const EngineConfig& cfg,
                          const ActionMask* precomputed) {
  if (kind_ == ScriptedKind::Static) return Action::Stop;
  Action base = simple_action(obs, cfg);
  if (kind_ == ScriptedKind::Simple) return base;

  ActionMask mask = precomputed ? *precomputed : compute_mask(obs, cfg);
  if (kind_ == ScriptedKind::SmartSimpleNobomb) {
    mask.at(Action::Bomb) = false;
    if (mask.count() == 0) return Action::Stop;
  }
  if (mask[base]) return base;
  int pick = static_cast<int>(rng_.below(static_cast<uint32_t>(mask.count())));
  for (int i = 0; i < kNumActions; ++i) {
    if (!mask.allowed[i]) continue;
    if (pick-- == 0) return static_cast<Action>(i);
  }
  return Action::Stop;
}

Action ScriptedAgent::simple_action(const RawObservation& obs, const EngineConfig& cfg) {
  (void)cfg;
  static thread_local View view;
  build_view(obs, view);
  const int self = cell_index(obs.pos);
  const bool bomb_underfoot = obs.cell(obs.pos).has_bomb;

  auto random_move = [&](bool avoid_danger) -> Action {
    std::array<Action, 5> options{};
    int n = 0;
    for (int d = 0; d < 4; ++d) {
      Pos q = offset(obs.pos, kDirs[d]);
      if (!in_bounds(q) || !view.passable[cell_index(q)]) continue;
      if (avoid_danger && view.danger[cell_index(q)]) continue;
      options[n++] = kMoveActions[d];
    }
    if (!avoid_danger || !view.danger[self]) options[n++] = Action::Stop;
    if (n == 0) return Action::Stop;
    return options[rng_.below(static_cast<uint32_t>(n))];
  };

  // Flee first when standing in a blast line.
  if (view.danger[self]) {
    int best = -1;
    for (int i = 0; i < kNumCells; ++i) {
      if (view.danger[i] || view.dist[i] <= 0) continue;
      if (best < 0 || view.dist[i] < view.dist[best]) best = i;
    }
    if (best >= 0) return static_cast<Action>(view.first_step[best]);
    return random_move(false);
  }

  if (rng_.chance(scfg_.epsilon)) return random_move(true);

  if (adjacent_enemy(obs) && obs.ammo > 0 && !bomb_underfoot) return Action::Bomb;

  // Nearest visible powerup.
  int target = -1;
  for (int i = 0; i < kNumCells; ++i) {
    const ObsCell& cell = obs.cells[i];
    if (cell.fog || cell.powerup == Powerup::None) continue;
    if (view.dist[i] <= 0) continue;
    if (target < 0 || view.dist[i] < view.dist[target]) target = i;
  }
  if (target >= 0) return static_cast<Action>(view.first_step[target]);

  if (adjacent_wood(obs) && obs.ammo > 0 && !bomb_underfoot) return Action::Bomb;

  // Approach the nearest reachable cell adjacent to wood.
  for (int i = 0; i < kNumCells; ++i) {
    if (view.dist[i] <= 0) continue;
    Pos p = pos_of(i);
    bool near_wood = false;
    for (Pos d : kDirs) {
      Pos q = offset(p, d);
      if (!in_bounds(q)) continue;
      const ObsCell& cell = obs.cell(q);
      if (!cell.fog && cell.kind == TileKind::Wood) near_wood = true;
    }
    if (!near_wood) continue;
    if (target < 0 || view.dist[i] < view.dist[target]) target = i;
  }
  if (target >= 0) return static_cast<Action>(view.first_step[target]);

  return random_move(true);
}

}  // namespace teamradio

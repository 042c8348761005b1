// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_GUARD_HPP_
#define TEAMRADIO_GUARD_HPP_

#include "teamradio/engine.hpp"
#include "teamradio/types.hpp"

namespace teamradio {

// Lookahead window: every live bomb has burned out by then, so surviving the
// window means surviving the current hazard set.
inline int guard_horizon(const EngineConfig& cfg) { return cfg.bomb_life + cfg.flame_life; }

struct GuardDecision {
  ActionMask mask;
  bool fallback_all_unsafe = false;  // every action was lethal; mask re-opened
};

// One-step lookahead safety filter over an agent's observation.
//
// A movement/stop action is masked when it is illegal (wall, edge, bomb
// without kick, another agent) or when no action sequence survives from the
// resulting cell, judged against the visible hazards simulated forward with
// the engine (other agents static, bombs sliding on, fuses ticking, chains
// included). Bomb placement is additionally vetoed when the agent stands in
// an existing bomb's blast line and the new bomb would close every escape.
// Bombs outside the view do not exist for the filter. If everything is
// masked, everything is re-allowed so downstream action distributions stay
// well-defined.
GuardDecision compute_mask_detailed(const RawObservation& obs, const EngineConfig& cfg);
ActionMask compute_mask(const RawObservation& obs, const EngineConfig& cfg);

// Validation oracle: exhaustive search over the agent's move/stop sequences
// up to `horizon`, stepping the full engine with the other agents held
// static. True iff every sequence ends in death. Memoized on (position,
// depth), which is exact as long as no bomb is in motion (the focal agent
// cannot otherwise influence the world by moving); scenario generators for
// soundness tests keep bombs at rest. Bomb placement is not searched — it
// only adds hazards within the window.
bool oracle_certain_death(const GameState& state, int agent_id, int horizon,
                          const EngineConfig& cfg);

}  // namespace teamradio

#endif  // TEAMRADIO_GUARD_HPP_

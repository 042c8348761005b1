// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_REPLAY_HPP_
#define TEAMRADIO_REPLAY_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "teamradio/engine.hpp"

namespace teamradio {

// Line-delimited replay: one header record (seed + engine config + which team
// carries the radio), one record per tick with the 4 actions, the radio
// team's 2 messages and the post-step state hash, and a terminal record.
// Re-simulating the actions through `step` must land on the logged result and
// hash bit-exactly.
struct ReplayTick {
  std::array<Action, kNumAgents> actions{};
  std::array<Message, 2> messages{};  // radio team's two agents, board order
  uint64_t hash_after = 0;
};

struct Replay {
  uint64_t seed = 0;
  EngineConfig engine;
  int radio_team = 0;
  std::vector<ReplayTick> ticks;
  GameResult final_result = GameResult::Ongoing;
  uint64_t final_hash = 0;

  void record(const std::array<Action, kNumAgents>& actions,
              const std::array<Message, kNumAgents>& messages, const GameState& after);
  void finish(const GameState& terminal);

  std::string serialize() const;
  static Replay parse(const std::string& text);  // throws std::runtime_error

  void save(const std::string& path) const;
  static Replay load(const std::string& path);
};

struct ReplayVerification {
  bool ok = false;
  int first_divergent_tick = -1;  // -1 when ok
  GameResult result = GameResult::Ongoing;
  uint16_t final_tick = 0;
  std::string detail;
};

// Re-simulates and checks every per-tick hash plus the terminal record.
// `on_state`, when set, sees the state after every step (rendering, stats).
ReplayVerification verify_replay(
    const Replay& replay,
    const std::function<void(const GameState&, const ReplayTick&)>& on_state = nullptr);

}  // namespace teamradio

#endif  // TEAMRADIO_REPLAY_HPP_

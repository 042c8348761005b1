// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_SCRIPTED_HPP_
#define TEAMRADIO_SCRIPTED_HPP_

#include <string>

#include "teamradio/config.hpp"
#include "teamradio/engine.hpp"
#include "teamradio/rng.hpp"
#include "teamradio/types.hpp"

namespace teamradio {

enum class ScriptedKind : uint8_t { Static, Simple, SmartSimple, SmartSimpleNobomb };

const char* scripted_kind_name(ScriptedKind kind);
bool parse_scripted_kind(const std::string& name, ScriptedKind* out);

// Rule-based opponents.
//
// Static only stops. Simple is the classic heuristic: BFS pathing within its
// view, retreat from naive blast lines, bomb an adjacent enemy (diagonals
// included — it famously keeps doing this while body-blocked, a quirk kept
// intact on purpose), chase powerups, open wooden walls, otherwise wander.
// SmartSimple re-samples Simple's pick among filter-allowed actions;
// SmartSimpleNobomb additionally never bombs.
class ScriptedAgent {
 public:
  ScriptedAgent(ScriptedKind kind, uint64_t seed, const ScriptedConfig& scfg = {});

  Action act(const RawObservation& obs, const EngineConfig& cfg);
  // Variant for callers that already ran the filter on this observation.
  Action act(const RawObservation& obs, const EngineConfig& cfg, const ActionMask* mask);
  ScriptedKind kind() const { return kind_; }

 private:
  Action simple_action(const RawObservation& obs, const EngineConfig& cfg);

  ScriptedKind kind_;
  Rng rng_;
  ScriptedConfig scfg_;
};

}  // namespace teamradio

#endif  // TEAMRADIO_SCRIPTED_HPP_

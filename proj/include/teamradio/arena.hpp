// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_ARENA_HPP_
#define TEAMRADIO_ARENA_HPP_

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "teamradio/config.hpp"
#include "teamradio/learn.hpp"
#include "teamradio/net.hpp"
#include "teamradio/replay.hpp"
#include "teamradio/scripted.hpp"

namespace teamradio {

// Frozen checkpoints of the learner standing in for external opponents.
// Adding never mutates existing entries; slots pick uniformly per match.
class SnapshotRegistry {
 public:
  void add(const PolicyNet<float>& net) {
    snaps_.push_back(std::make_shared<PolicyNet<float>>(net));
  }
  bool empty() const { return snaps_.empty(); }
  std::size_t size() const { return snaps_.size(); }
  std::shared_ptr<const PolicyNet<float>> pick(Rng& rng) const {
    return snaps_[rng.below(static_cast<uint32_t>(snaps_.size()))];
  }

 private:
  std::vector<std::shared_ptr<const PolicyNet<float>>> snaps_;
};

// A pool entry resolved for one match.
struct Opponent {
  enum class Type { Scripted, Snapshot } type = Type::Scripted;
  ScriptedKind scripted_kind = ScriptedKind::Static;
  std::shared_ptr<const PolicyNet<float>> snapshot;
  std::string label = "static";
};

// One side of a match: either a policy network (radio on, filtered, sampled)
// or a scripted kind driving both of that team's agents.
struct SideSpec {
  enum class Type { Policy, Scripted } type = Type::Scripted;
  const PolicyNet<float>* policy = nullptr;
  ScriptedKind scripted_kind = ScriptedKind::Static;

  static SideSpec from_policy(const PolicyNet<float>& net) {
    return SideSpec{Type::Policy, &net, ScriptedKind::Static};
  }
  static SideSpec from_scripted(ScriptedKind kind) {
    return SideSpec{Type::Scripted, nullptr, kind};
  }
  static SideSpec from_opponent(const Opponent& opp) {
    if (opp.type == Opponent::Type::Snapshot && opp.snapshot)
      return SideSpec{Type::Policy, opp.snapshot.get(), ScriptedKind::Static};
    return from_scripted(opp.scripted_kind);
  }
};

struct MatchOptions {
  bool use_filter = true;      // guard mask on the learner side
  EncodeOptions encode;        // ablation flags for the learner side
  bool keep_trajectories = true;
  int max_ticks_override = 0;  // 0 keeps engine default; shortens training games
};

// Statistics ingredients of one finished game, small enough to keep per-slot
// so parallel evaluation folds deterministically in match order afterwards.
struct GameSummary {
  GameResult raw_result = GameResult::Ongoing;
  int learner_team = 0;
  uint16_t length = 0;
  bool timeout = false;
  bool won = false, lost = false, tied = false;  // learner's perspective
  bool teammate_died = false;                    // either learner agent dead by the end
  std::array<int, 2> unique_cells{};
  std::array<int, 2> ticks_alive{};
  std::array<double, 2> shaped_reward{};
  std::array<std::vector<float>, 2> value_by_tick;  // learner agents, indexed by obs tick
  std::array<uint32_t, kNumCells> visits{};         // both teammates, every alive tick
  std::array<uint32_t, kNumCells> bombs_placed{};
};

struct MatchOutcome {
  GameSummary summary;
  std::array<Trajectory, 2> trajectories;  // kept when opts.keep_trajectories
  Replay replay;
};

// Samples opponent entries i.i.d. per the pool weights (percent); the result
// is a list of pool indices, deterministic under the rng.
std::vector<int> schedule_batch(const std::vector<PoolEntry>& pool, int n_games, Rng& rng);

Opponent resolve_pool_entry(const PoolEntry& entry, const SnapshotRegistry& snapshots,
                            Rng& rng);

// Plays one full game: the learner side drives both teammates (independent
// beliefs, radio each tick), the opponent side both enemies. The learner team
// sits on the NW-SE or NE-SW diagonal by a per-match coin flip.
MatchOutcome run_match(const SideSpec& learner, const SideSpec& opponent,
                       uint64_t match_seed, const EngineConfig& engine_cfg,
                       const ScriptedConfig& scripted_cfg, const MatchOptions& opts);

struct MatchStats {
  static constexpr int kValueBins = 20;
  int games = 0;
  int wins = 0, losses = 0, ties = 0;
  std::array<std::vector<uint16_t>, 3> game_lengths;  // W/L/T, timeouts excluded
  std::vector<double> unique_cells_per_tick;          // per agent per game
  std::array<uint64_t, kNumCells> visits{};
  std::array<uint64_t, kNumCells> bombs_placed{};
  // value-prediction histograms: [tick][result W/L/T][bin over [-1,1]]
  std::vector<std::array<std::array<uint32_t, kValueBins>, 3>> value_hist;
  std::array<std::array<int, 3>, 2> teammate_split{};  // [teammate died? 0/1][W/L/T]

  double win_pct() const { return games ? 100.0 * wins / games : 0.0; }
  double loss_pct() const { return games ? 100.0 * losses / games : 0.0; }
  double tie_pct() const { return games ? 100.0 * ties / games : 0.0; }

  void fold(const GameSummary& g, int max_ticks);
  std::string table(const std::string& title) const;
  void write_files(const std::string& dir, const std::string& prefix) const;
};

enum class AblationMode { None, NoComm, NoBelief };

EncodeOptions ablation_options(AblationMode mode);

// n games against one opponent; statistics folded in match order. Ablations
// zero the corresponding encoder inputs for the learner side.
MatchStats evaluate(const SideSpec& learner, const SideSpec& opponent, int n_games,
                    uint64_t seed, const EngineConfig& engine_cfg,
                    const ScriptedConfig& scripted_cfg, AblationMode mode, int workers,
                    std::vector<Replay>* replays_out = nullptr);

// Recomputes one game's statistics from its replay (plus the policy for value
// traces): replays are the source of truth for all analytics.
GameSummary summary_from_replay(const Replay& replay, const SideSpec& learner,
                                const MatchOptions& opts);

int default_workers(int configured);

// Runs fn(i) for i in [0, n) across `workers` threads. Results must be
// written into caller-owned slots so any later fold is order-deterministic.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace teamradio

#endif  // TEAMRADIO_ARENA_HPP_

// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_PIPELINE_HPP_
#define TEAMRADIO_PIPELINE_HPP_

#include <string>
#include <vector>

#include "teamradio/arena.hpp"
#include "teamradio/config.hpp"
#include "teamradio/dataset.hpp"

namespace teamradio {

// Plays one all-SmartSimple game and returns subsampled imitation records.
// The play itself is radio-silent; message fields and position channels are
// reconstructed afterwards from what each teammate actually observed.
std::vector<DatasetRecord> generate_imitation_game(uint64_t game_seed,
                                                   const EngineConfig& engine_cfg,
                                                   const ScriptedConfig& scripted_cfg,
                                                   int records_per_game);

struct GenImitationReport {
  std::string dataset_path;
  uint64_t games = 0;
  uint64_t records = 0;
};

GenImitationReport run_gen_imitation(const RunConfig& cfg, const std::string& config_path);

struct TrainReport {
  std::string checkpoint_path;   // final checkpoint
  std::string metrics_path;      // per-batch CSV
  std::string games_path;        // per-game CSV (reward curves, unique cells)
  int batches = 0;
  int games = 0;
  std::vector<double> imitation_val_loss;
};

// Imitation seeding (when a dataset is configured) followed by PPO against
// the opponent pool. `init_checkpoint` skips imitation and starts from a
// saved policy instead.
TrainReport run_train(const RunConfig& cfg, const std::string& config_path,
                      const std::string& init_checkpoint = {});

struct EvalReport {
  MatchStats stats;
  std::string stats_dir;
  std::string table;
};

EvalReport run_eval(const RunConfig& cfg, const std::string& config_path);

struct ReplayReport {
  bool verified = false;
  int first_divergent_tick = -1;
  int final_tick = 0;
  int result = 0;
  std::string detail;
  std::string render;  // per-tick ASCII when requested
};

ReplayReport run_replay(const std::string& replay_path, bool render);

}  // namespace teamradio

#endif  // TEAMRADIO_PIPELINE_HPP_

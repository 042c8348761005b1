// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_CONFIG_HPP_
#define TEAMRADIO_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace teamradio {

// Board generation and tick rules. The counts are the reference defaults;
// everything here is overridable from the config file.
struct EngineConfig {
  int rigid_count = 36;
  int wood_count = 36;
  int powerup_count = 20;
  int flame_life = 2;
  int bomb_life = 10;   // ticks from placement to explosion
  int max_ticks = 800;
  int view_radius = 5;  // Chebyshev sight distance
  int initial_ammo = 1;
  int initial_blast = 3;  // bomb cell + 2 further cells per direction
};

struct NetArch {
  int in_channels = 33;
  std::array<int, 3> filters = {32, 64, 64};
  int hidden = 128;
};

struct ScriptedConfig {
  double epsilon = 0.1;  // per-step random-move chance of the Simple heuristic
};

struct ImitationConfig {
  int games = 12000;
  int records_per_game = 4;  // 12K games -> ~48K samples
  int batch_size = 4096;
  int epochs = 10;
  double lr = 1e-3;
  double val_split = 0.2;
  std::string dataset;  // input path for training, output path for generation
};

struct PoolEntry {
  std::string opponent;  // static | simple | smart_simple | smart_simple_nobomb | snapshot
  int weight = 0;        // percent
};

struct TrainConfig {
  double gamma = 0.99;
  double lambda = 0.95;
  double clip = 0.2;
  double lr = 2.5e-4;
  int games_per_batch = 128;
  int epochs_per_batch = 4;
  int minibatch = 4096;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  bool adv_norm = true;
  bool use_filter = true;
  int games = 20000;
  int snapshot_every_batches = 20;
  int train_max_ticks = 0;  // 0 = engine max_ticks
  std::vector<PoolEntry> pool;  // defaults filled in load/validate
};

struct EvalConfig {
  int games = 1000;
  std::string opponent = "static";
  std::string checkpoint;
  bool no_comm = false;
  bool no_belief = false;
  bool save_replays = false;
};

struct RunConfig {
  EngineConfig engine;
  NetArch net;
  ScriptedConfig scripted;
  ImitationConfig imitation;
  TrainConfig train;
  EvalConfig eval;
  uint64_t seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  std::string out = "out";
};

std::vector<PoolEntry> default_pool();

// Parse/emit the config file format (JSON). `parse_run_config` applies the
// text on top of defaults; unknown keys are an error so typos do not pass
// silently. Throws std::runtime_error with a description on bad input.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config_file(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);

void validate_pool(const std::vector<PoolEntry>& pool);  // weights sum to 100

}  // namespace teamradio

#endif  // TEAMRADIO_CONFIG_HPP_

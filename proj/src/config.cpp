// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace teamradio {

namespace {

using nlohmann::json;

void check_keys(const json& j, const char* section, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) known = true;
    if (!known)
      throw std::runtime_error(std::string("config: unknown key '") + it.key() + "' in " +
                               section);
  }
}

template <typename T>
void get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::vector<PoolEntry> default_pool() {
  // Static 50, heuristics 5+5, frozen-snapshot slots standing in for the
  // unavailable external opponents at 20/10/10.
  return {{"static", 50},   {"smart_simple", 5}, {"smart_simple_nobomb", 5},
          {"snapshot", 20}, {"snapshot", 10},    {"snapshot", 10}};
}

void validate_pool(const std::vector<PoolEntry>& pool) {
  if (pool.empty()) throw std::runtime_error("config: opponent pool is empty");
  int sum = 0;
  for (const PoolEntry& e : pool) {
    if (e.weight < 0) throw std::runtime_error("config: negative pool weight");
    sum += e.weight;
  }
  if (sum != 100)
    throw std::runtime_error("config: pool weights must sum to 100, got " +
                             std::to_string(sum));
}

RunConfig parse_run_config(const std::string& json_text) {
  RunConfig cfg;
  cfg.train.pool = default_pool();
  if (json_text.empty()) return cfg;
  json j = json::parse(json_text);
  check_keys(j, "root",
             {"engine", "net", "scripted", "imitation", "train", "eval", "seed", "workers",
              "out"});
  if (j.contains("engine")) {
    const json& e = j["engine"];
    check_keys(e, "engine",
               {"rigid", "wood", "powerups", "flame_life", "bomb_life", "max_ticks",
                "view_radius", "initial_ammo", "initial_blast"});
    get(e, "rigid", cfg.engine.rigid_count);
    get(e, "wood", cfg.engine.wood_count);
    get(e, "powerups", cfg.engine.powerup_count);
    get(e, "flame_life", cfg.engine.flame_life);
    get(e, "bomb_life", cfg.engine.bomb_life);
    get(e, "max_ticks", cfg.engine.max_ticks);
    get(e, "view_radius", cfg.engine.view_radius);
    get(e, "initial_ammo", cfg.engine.initial_ammo);
    get(e, "initial_blast", cfg.engine.initial_blast);
  }
  if (j.contains("net")) {
    const json& n = j["net"];
    check_keys(n, "net", {"filters", "hidden"});
    if (n.contains("filters")) {
      auto f = n["filters"].get<std::vector<int>>();
      if (f.size() != 3) throw std::runtime_error("config: net.filters needs 3 entries");
      for (int i = 0; i < 3; ++i) cfg.net.filters[i] = f[i];
    }
    get(n, "hidden", cfg.net.hidden);
  }
  if (j.contains("scripted")) {
    const json& s = j["scripted"];
    check_keys(s, "scripted", {"epsilon"});
    get(s, "epsilon", cfg.scripted.epsilon);
  }
  if (j.contains("imitation")) {
    const json& i = j["imitation"];
    check_keys(i, "imitation",
               {"games", "records_per_game", "batch_size", "epochs", "lr", "val_split",
                "dataset"});
    get(i, "games", cfg.imitation.games);
    get(i, "records_per_game", cfg.imitation.records_per_game);
    get(i, "batch_size", cfg.imitation.batch_size);
    get(i, "epochs", cfg.imitation.epochs);
    get(i, "lr", cfg.imitation.lr);
    get(i, "val_split", cfg.imitation.val_split);
    get(i, "dataset", cfg.imitation.dataset);
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    check_keys(t, "train",
               {"gamma", "lambda", "clip", "lr", "games_per_batch", "epochs_per_batch",
                "minibatch", "entropy_coef", "value_coef", "adv_norm", "use_filter", "games",
                "snapshot_every_batches", "train_max_ticks", "pool"});
    get(t, "gamma", cfg.train.gamma);
    get(t, "lambda", cfg.train.lambda);
    get(t, "clip", cfg.train.clip);
    get(t, "lr", cfg.train.lr);
    get(t, "games_per_batch", cfg.train.games_per_batch);
    get(t, "epochs_per_batch", cfg.train.epochs_per_batch);
    get(t, "minibatch", cfg.train.minibatch);
    get(t, "entropy_coef", cfg.train.entropy_coef);
    get(t, "value_coef", cfg.train.value_coef);
    get(t, "adv_norm", cfg.train.adv_norm);
    get(t, "use_filter", cfg.train.use_filter);
    get(t, "games", cfg.train.games);
    get(t, "snapshot_every_batches", cfg.train.snapshot_every_batches);
    get(t, "train_max_ticks", cfg.train.train_max_ticks);
    if (t.contains("pool")) {
      cfg.train.pool.clear();
      for (const json& e : t["pool"]) {
        check_keys(e, "train.pool[]", {"opponent", "weight"});
        PoolEntry entry;
        get(e, "opponent", entry.opponent);
        get(e, "weight", entry.weight);
        cfg.train.pool.push_back(entry);
      }
    }
  }
  if (j.contains("eval")) {
    const json& e = j["eval"];
    check_keys(e, "eval",
               {"games", "opponent", "checkpoint", "no_comm", "no_belief", "save_replays"});
    get(e, "games", cfg.eval.games);
    get(e, "opponent", cfg.eval.opponent);
    get(e, "checkpoint", cfg.eval.checkpoint);
    get(e, "no_comm", cfg.eval.no_comm);
    get(e, "no_belief", cfg.eval.no_belief);
    get(e, "save_replays", cfg.eval.save_replays);
  }
  get(j, "seed", cfg.seed);
  get(j, "workers", cfg.workers);
  get(j, "out", cfg.out);
  validate_pool(cfg.train.pool);
  return cfg;
}

RunConfig load_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["engine"] = {{"rigid", cfg.engine.rigid_count},
                 {"wood", cfg.engine.wood_count},
                 {"powerups", cfg.engine.powerup_count},
                 {"flame_life", cfg.engine.flame_life},
                 {"bomb_life", cfg.engine.bomb_life},
                 {"max_ticks", cfg.engine.max_ticks},
                 {"view_radius", cfg.engine.view_radius},
                 {"initial_ammo", cfg.engine.initial_ammo},
                 {"initial_blast", cfg.engine.initial_blast}};
  j["net"] = {{"filters", {cfg.net.filters[0], cfg.net.filters[1], cfg.net.filters[2]}},
              {"hidden", cfg.net.hidden}};
  j["scripted"] = {{"epsilon", cfg.scripted.epsilon}};
  j["imitation"] = {{"games", cfg.imitation.games},
                    {"records_per_game", cfg.imitation.records_per_game},
                    {"batch_size", cfg.imitation.batch_size},
                    {"epochs", cfg.imitation.epochs},
                    {"lr", cfg.imitation.lr},
                    {"val_split", cfg.imitation.val_split},
                    {"dataset", cfg.imitation.dataset}};
  json pool = json::array();
  for (const PoolEntry& e : cfg.train.pool)
    pool.push_back({{"opponent", e.opponent}, {"weight", e.weight}});
  j["train"] = {{"gamma", cfg.train.gamma},
                {"lambda", cfg.train.lambda},
                {"clip", cfg.train.clip},
                {"lr", cfg.train.lr},
                {"games_per_batch", cfg.train.games_per_batch},
                {"epochs_per_batch", cfg.train.epochs_per_batch},
                {"minibatch", cfg.train.minibatch},
                {"entropy_coef", cfg.train.entropy_coef},
                {"value_coef", cfg.train.value_coef},
                {"adv_norm", cfg.train.adv_norm},
                {"use_filter", cfg.train.use_filter},
                {"games", cfg.train.games},
                {"snapshot_every_batches", cfg.train.snapshot_every_batches},
                {"train_max_ticks", cfg.train.train_max_ticks},
                {"pool", pool}};
  j["eval"] = {{"games", cfg.eval.games},       {"opponent", cfg.eval.opponent},
               {"checkpoint", cfg.eval.checkpoint}, {"no_comm", cfg.eval.no_comm},
               {"no_belief", cfg.eval.no_belief},   {"save_replays", cfg.eval.save_replays}};
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["out"] = cfg.out;
  return j.dump(2);
}

}  // namespace teamradio

// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0
//
// teamradio CLI: gen-imitation | train | eval | replay. Thin front-end over
// the C API: flags are merged into the JSON config document and handed to the
// library.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "teamradio.h"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::string out;
  uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
  int games = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "config file (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--seed", flags.seed, "master seed")->each([&](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_option("--workers", flags.workers, "worker threads (default: all cores)");
  cmd->add_option("--games", flags.games, "number of games");
}

json load_config(const CommonFlags& flags) {
  if (flags.config_path.empty()) return json::object();
  std::ifstream in(flags.config_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

void apply_common(json& cfg, const CommonFlags& flags) {
  if (!flags.out.empty()) cfg["out"] = flags.out;
  if (flags.seed_set) cfg["seed"] = flags.seed;
  if (flags.workers >= 0) cfg["workers"] = flags.workers;
}

int check(tr_status status) {
  if (status == TR_OK) return 0;
  std::cerr << "error (" << tr_status_name(status) << "): " << tr_last_error() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pommerman TeamRadio simulation & training toolkit"};
  app.require_subcommand(1);

  // gen-imitation
  auto* gen = app.add_subcommand("gen-imitation",
                                 "play smart-simple self-play games and write the "
                                 "imitation dataset");
  CommonFlags gen_flags;
  add_common(gen, gen_flags);
  std::string gen_dataset;
  gen->add_option("--dataset", gen_dataset, "dataset output path");

  // train
  auto* train = app.add_subcommand("train", "imitation seeding + PPO against the pool");
  CommonFlags train_flags;
  add_common(train, train_flags);
  std::string train_dataset, init_checkpoint;
  bool no_filter = false;
  train->add_option("--dataset", train_dataset, "imitation dataset path");
  train->add_option("--init-checkpoint", init_checkpoint,
                    "skip imitation, start from this checkpoint");
  train->add_flag("--no-filter", no_filter, "train without the safety action filter");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint against one opponent");
  CommonFlags eval_flags;
  add_common(eval, eval_flags);
  std::string checkpoint, opponent = "static";
  bool no_comm = false, no_belief = false, save_replays = false;
  eval->add_option("checkpoint", checkpoint,
                   "checkpoint file or scripted policy name (static, simple, "
                   "smart_simple, smart_simple_nobomb)")
      ->required();
  eval->add_option("--opponent", opponent, "opponent: scripted name or checkpoint file");
  eval->add_flag("--no-comm", no_comm, "zero message delivery (before/after table)");
  eval->add_flag("--no-belief", no_belief, "zero the belief channels (before/after table)");
  eval->add_flag("--replays", save_replays, "store verifiable replays");

  // replay
  auto* replay = app.add_subcommand("replay", "verify a replay file");
  std::string replay_path;
  bool render = false;
  replay->add_option("file", replay_path, "replay file")->required();
  replay->add_flag("--render", render, "print the per-tick ASCII board");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    json cfg = load_config(gen_flags);
    apply_common(cfg, gen_flags);
    if (gen_flags.games >= 0) cfg["imitation"]["games"] = gen_flags.games;
    if (!gen_dataset.empty()) cfg["imitation"]["dataset"] = gen_dataset;
    return check(tr_run_gen_imitation(cfg.dump().c_str(), gen_flags.config_path.c_str()));
  }

  if (train->parsed()) {
    json cfg = load_config(train_flags);
    apply_common(cfg, train_flags);
    if (train_flags.games >= 0) cfg["train"]["games"] = train_flags.games;
    if (!train_dataset.empty()) cfg["imitation"]["dataset"] = train_dataset;
    if (no_filter) cfg["train"]["use_filter"] = false;
    return check(tr_run_train(cfg.dump().c_str(), train_flags.config_path.c_str(),
                              init_checkpoint.c_str()));
  }

  if (eval->parsed()) {
    json cfg = load_config(eval_flags);
    apply_common(cfg, eval_flags);
    cfg["eval"]["checkpoint"] = checkpoint;
    cfg["eval"]["opponent"] = opponent;
    if (eval_flags.games >= 0) cfg["eval"]["games"] = eval_flags.games;
    if (no_comm) cfg["eval"]["no_comm"] = true;
    if (no_belief) cfg["eval"]["no_belief"] = true;
    if (save_replays) cfg["eval"]["save_replays"] = true;
    char* report = nullptr;
    tr_status st = tr_run_eval(cfg.dump().c_str(), eval_flags.config_path.c_str(), &report);
    if (report != nullptr) {
      json j = json::parse(report);
      std::cout << j["table"].get<std::string>();
      tr_string_free(report);
    }
    return check(st);
  }

  if (replay->parsed()) {
    char* report = nullptr;
    tr_status st = tr_run_replay(replay_path.c_str(), render ? 1 : 0, &report);
    if (report != nullptr) {
      json j = json::parse(report);
      if (render && j.contains("render")) std::cout << j["render"].get<std::string>();
      if (j["verified"].get<bool>()) {
        std::cout << "replay verified: result " << j["result"] << " at tick "
                  << j["final_tick"] << ", zero divergence\n";
      } else {
        std::cout << "replay DIVERGED at tick " << j["first_divergent_tick"] << ": "
                  << j["detail"].get<std::string>() << "\n";
      }
      tr_string_free(report);
    }
    return check(st);
  }

  return 0;
}

// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "teamradio/guard.hpp"
#include "teamradio/radio.hpp"
#include "teamradio/util.hpp"

namespace teamradio {

namespace {

struct RecordedStep {
  RawObservation obs;
  uint8_t action = 0;
  uint8_t mask_bits = 0x3f;
};

void hash_input(RunManifest& manifest, const std::string& path) {
  if (path.empty()) return;
  manifest.input_hashes.emplace_back(path, git_blob_sha1(read_file(path)));
}

SideSpec side_from_name(const std::string& name, PolicyNet<float>* storage) {
  ScriptedKind kind;
  if (parse_scripted_kind(name, &kind)) return SideSpec::from_scripted(kind);
  *storage = load_checkpoint(name);
  return SideSpec::from_policy(*storage);
}

}  // namespace

std::vector<DatasetRecord> generate_imitation_game(uint64_t game_seed,
                                                   const EngineConfig& engine_cfg,
                                                   const ScriptedConfig& scripted_cfg,
                                                   int records_per_game) {
  GameState state = generate_board(derive_seed(game_seed, 1), engine_cfg);
  std::array<ScriptedAgent, kNumAgents> agents = {
      ScriptedAgent(ScriptedKind::SmartSimple, derive_seed(game_seed, 32), scripted_cfg),
      ScriptedAgent(ScriptedKind::SmartSimple, derive_seed(game_seed, 33), scripted_cfg),
      ScriptedAgent(ScriptedKind::SmartSimple, derive_seed(game_seed, 34), scripted_cfg),
      ScriptedAgent(ScriptedKind::SmartSimple, derive_seed(game_seed, 35), scripted_cfg)};

  // The game is played radio-silent; per-agent histories feed the post-hoc
  // message reconstruction below.
  std::array<std::vector<RecordedStep>, kNumAgents> history;
  std::array<Message, kNumAgents> silent{};
  while (state.result == GameResult::Ongoing) {
    std::array<Action, kNumAgents> actions{};
    for (int id = 0; id < kNumAgents; ++id) {
      if (!state.agents[id].alive) continue;
      RecordedStep rec;
      rec.obs = observe(state, id, engine_cfg);
      ActionMask mask = compute_mask(rec.obs, engine_cfg);
      rec.mask_bits = mask.bits();
      actions[id] = agents[id].act(rec.obs, engine_cfg, &mask);
      rec.action = static_cast<uint8_t>(actions[id]);
      history[id].push_back(std::move(rec));
    }
    step(state, actions, silent, engine_cfg);
  }

  // Sample (agent, tick) pairs uniformly without replacement.
  std::vector<std::pair<int, int>> all;
  for (int id = 0; id < kNumAgents; ++id)
    for (std::size_t t = 0; t < history[id].size(); ++t)
      all.emplace_back(id, static_cast<int>(t));
  Rng rng(derive_seed(game_seed, 77));
  rng.shuffle(all.data(), all.size());
  std::size_t take = std::min<std::size_t>(all.size(), static_cast<std::size_t>(records_per_game));
  std::vector<std::pair<int, int>> picked(all.begin(), all.begin() + take);
  std::sort(picked.begin(), picked.end());

  // Reconstruct: the message an agent would have held at step t is its
  // teammate's coarse summary from step t-1.
  std::vector<DatasetRecord> records;
  records.reserve(picked.size());
  std::size_t cursor = 0;
  for (int id = 0; id < kNumAgents && cursor < picked.size(); ++id) {
    if (picked[cursor].first != id) continue;
    BeliefState belief;
    const int teammate = teammate_of(id);
    for (int t = 0; t < static_cast<int>(history[id].size()) && cursor < picked.size(); ++t) {
      const RecordedStep& rec = history[id][t];
      belief.update(rec.obs, rec.obs.tick);
      if (picked[cursor].first != id) break;
      if (picked[cursor].second != t) continue;
      Message msg = kNoMessage;
      if (rec.obs.alive[teammate]) {
        // Find the teammate's observation one tick earlier, if it existed.
        for (const RecordedStep& mate : history[teammate]) {
          if (mate.obs.tick + 1 == rec.obs.tick) {
            msg = encode_message(summarize(mate.obs));
            break;
          }
        }
      }
      DatasetRecord out;
      RawObservation obs_with_msg = rec.obs;
      obs_with_msg.inbox = msg;
      out.obs = encode(obs_with_msg, belief, msg, engine_cfg);
      out.action = rec.action;
      out.mask_bits = rec.mask_bits;
      out.message = msg;
      records.push_back(std::move(out));
      ++cursor;
    }
  }
  return records;
}

GenImitationReport run_gen_imitation(const RunConfig& cfg, const std::string& config_path) {
  ensure_dir(cfg.out);
  std::string dataset_path =
      cfg.imitation.dataset.empty() ? cfg.out + "/imitation.ds" : cfg.imitation.dataset;
  DatasetWriter writer(dataset_path);

  const int games = cfg.imitation.games;
  const int chunk = 256;
  std::vector<std::vector<DatasetRecord>> slots;
  for (int base = 0; base < games; base += chunk) {
    const int n = std::min(chunk, games - base);
    slots.assign(n, {});
    parallel_for(n, default_workers(cfg.workers), [&](int i) {
      slots[i] = generate_imitation_game(derive_seed(cfg.seed, 40000 + base + i), cfg.engine,
                                         cfg.scripted, cfg.imitation.records_per_game);
    });
    for (const auto& recs : slots)
      for (const DatasetRecord& r : recs) writer.append(r);
  }
  writer.close();

  RunManifest manifest;
  manifest.command = "gen-imitation";
  manifest.config_path = config_path;
  manifest.seed = cfg.seed;
  manifest.out_dir = cfg.out;
  hash_input(manifest, config_path);
  manifest.input_hashes.emplace_back(dataset_path, git_blob_sha1(read_file(dataset_path)));
  write_manifest(manifest);

  GenImitationReport report;
  report.dataset_path = dataset_path;
  report.games = static_cast<uint64_t>(games);
  report.records = writer.count();
  return report;
}

TrainReport run_train(const RunConfig& cfg, const std::string& config_path,
                      const std::string& init_checkpoint) {
  ensure_dir(cfg.out);
  TrainReport report;

  PolicyNet<float> net(cfg.net);
  {
    Rng init_rng(derive_seed(cfg.seed, 7));
    net.init(init_rng);
  }

  if (!init_checkpoint.empty()) {
    net = load_checkpoint(init_checkpoint);
  } else if (!cfg.imitation.dataset.empty()) {
    DatasetReader dataset(cfg.imitation.dataset);  // throws when missing
    ImitationMetrics im = imitate(net, dataset, cfg.imitation, cfg.seed);
    report.imitation_val_loss = im.val_loss;
    std::ostringstream csv;
    csv << "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < im.train_loss.size(); ++e)
      csv << (e + 1) << ',' << im.train_loss[e] << ',' << im.val_loss[e] << "\n";
    write_file(cfg.out + "/imitation_loss.csv", csv.str());
    save_checkpoint(cfg.out + "/imitation.ckpt", net, run_config_to_json(cfg));
  }

  Adam<float> adam(net.param_count());
  SnapshotRegistry snapshots;
  MatchOptions opts;
  opts.use_filter = cfg.train.use_filter;
  opts.max_ticks_override = cfg.train.train_max_ticks;

  std::ofstream metrics(cfg.out + "/train_metrics.csv");
  metrics << "batch,games,steps,reward_overall";
  std::vector<std::string> labels;
  for (const PoolEntry& e : cfg.train.pool)
    if (std::find(labels.begin(), labels.end(), e.opponent) == labels.end())
      labels.push_back(e.opponent);
  for (const std::string& l : labels) metrics << ",reward_" << l;
  metrics << ",policy_loss,value_loss,entropy,approx_kl,clip_fraction\n";

  std::ofstream games_csv(cfg.out + "/train_games.csv");
  games_csv << "game,opponent,result,length,shaped_reward_mean,env_reward,"
               "unique_cells_per_tick_mean\n";

  int games_done = 0;
  int batch_index = 0;
  const int workers = default_workers(cfg.workers);
  while (games_done < cfg.train.games) {
    const int n = std::min(cfg.train.games_per_batch, cfg.train.games - games_done);
    Rng batch_rng(derive_seed(cfg.seed, 1000 + batch_index));
    std::vector<int> picks = schedule_batch(cfg.train.pool, n, batch_rng);
    std::vector<Opponent> opponents(n);
    for (int i = 0; i < n; ++i)
      opponents[i] = resolve_pool_entry(cfg.train.pool[picks[i]], snapshots, batch_rng);

    std::vector<MatchOutcome> outcomes(n);
    SideSpec learner = SideSpec::from_policy(net);
    parallel_for(n, workers, [&](int i) {
      outcomes[i] = run_match(learner, SideSpec::from_opponent(opponents[i]),
                              derive_seed(cfg.seed, 500000 + games_done + i), cfg.engine,
                              cfg.scripted, opts);
    });

    std::vector<Trajectory> batch;
    batch.reserve(2 * n);
    std::map<std::string, std::pair<double, int>> reward_by_label;
    double reward_sum = 0.0;
    int reward_n = 0;
    for (int i = 0; i < n; ++i) {
      MatchOutcome& out = outcomes[i];
      double game_reward = 0.0;
      for (int k = 0; k < 2; ++k) {
        game_reward += out.summary.shaped_reward[k];
        out.trajectories[k].game_index = static_cast<uint64_t>(games_done + i);
        out.trajectories[k].opponent = opponents[i].label;
        batch.push_back(std::move(out.trajectories[k]));
      }
      game_reward /= 2.0;
      reward_sum += game_reward;
      ++reward_n;
      auto& slot = reward_by_label[opponents[i].label];
      slot.first += game_reward;
      ++slot.second;
      double uniq = 0.0;
      for (int k = 0; k < 2; ++k)
        if (out.summary.ticks_alive[k] > 0)
          uniq += static_cast<double>(out.summary.unique_cells[k]) /
                  out.summary.ticks_alive[k] / 2.0;
      int env = out.summary.won ? 1 : -1;
      const char* res = out.summary.won ? "win" : out.summary.lost ? "loss" : "tie";
      games_csv << (games_done + i) << ',' << opponents[i].label << ',' << res << ','
                << out.summary.length << ',' << game_reward << ',' << env << ',' << uniq
                << "\n";
    }

    PpoMetrics m = ppo_update(net, adam, batch, cfg.train, cfg.engine,
                              derive_seed(cfg.seed, 9000 + batch_index));

    metrics << batch_index << ',' << n << ',' << m.steps << ','
            << (reward_n ? reward_sum / reward_n : 0.0);
    for (const std::string& l : labels) {
      metrics << ',';
      auto it = reward_by_label.find(l);
      if (it != reward_by_label.end() && it->second.second > 0)
        metrics << it->second.first / it->second.second;
    }
    metrics << ',' << m.policy_loss << ',' << m.value_loss << ',' << m.entropy << ','
            << m.approx_kl << ',' << m.clip_fraction << "\n";
    metrics.flush();
    games_csv.flush();

    games_done += n;
    ++batch_index;
    if (cfg.train.snapshot_every_batches > 0 &&
        batch_index % cfg.train.snapshot_every_batches == 0) {
      snapshots.add(net);
      std::ostringstream name;
      name << cfg.out << "/snapshot_" << snapshots.size() << ".ckpt";
      save_checkpoint(name.str(), net, run_config_to_json(cfg));
    }
  }

  save_checkpoint(cfg.out + "/final.ckpt", net, run_config_to_json(cfg));

  RunManifest manifest;
  manifest.command = "train";
  manifest.config_path = config_path;
  manifest.seed = cfg.seed;
  manifest.out_dir = cfg.out;
  hash_input(manifest, config_path);
  if (!cfg.imitation.dataset.empty()) hash_input(manifest, cfg.imitation.dataset);
  if (!init_checkpoint.empty()) hash_input(manifest, init_checkpoint);
  write_manifest(manifest);

  report.checkpoint_path = cfg.out + "/final.ckpt";
  report.metrics_path = cfg.out + "/train_metrics.csv";
  report.games_path = cfg.out + "/train_games.csv";
  report.batches = batch_index;
  report.games = games_done;
  return report;
}

EvalReport run_eval(const RunConfig& cfg, const std::string& config_path) {
  ensure_dir(cfg.out);
  if (cfg.eval.checkpoint.empty())
    throw std::runtime_error("eval: checkpoint (or scripted policy name) required");

  PolicyNet<float> learner_storage({}), opp_storage({});
  SideSpec learner = side_from_name(cfg.eval.checkpoint, &learner_storage);
  SideSpec opponent = side_from_name(cfg.eval.opponent, &opp_storage);

  AblationMode mode = AblationMode::None;
  if (cfg.eval.no_comm && cfg.eval.no_belief)
    throw std::runtime_error("eval: pick one of no_comm / no_belief per run");
  if (cfg.eval.no_comm) mode = AblationMode::NoComm;
  if (cfg.eval.no_belief) mode = AblationMode::NoBelief;

  const int workers = default_workers(cfg.workers);
  std::vector<Replay> replays;
  EvalReport report;
  std::ostringstream table;

  MatchStats baseline = evaluate(learner, opponent, cfg.eval.games, cfg.seed, cfg.engine,
                                 cfg.scripted, AblationMode::None, workers,
                                 cfg.eval.save_replays ? &replays : nullptr);
  baseline.write_files(cfg.out, "baseline");
  table << baseline.table("baseline vs " + cfg.eval.opponent + " (" +
                          std::to_string(cfg.eval.games) + " games)");
  report.stats = baseline;

  if (mode != AblationMode::None) {
    MatchStats ablated = evaluate(learner, opponent, cfg.eval.games, cfg.seed, cfg.engine,
                                  cfg.scripted, mode, workers, nullptr);
    const char* name = mode == AblationMode::NoComm ? "no_comm" : "no_belief";
    ablated.write_files(cfg.out, name);
    table << ablated.table(std::string(name) + " vs " + cfg.eval.opponent);
    char line[160];
    std::snprintf(line, sizeof line,
                  "%s: W %.1f%% -> %.1f%%  L %.1f%% -> %.1f%%  T %.1f%% -> %.1f%%\n", name,
                  baseline.win_pct(), ablated.win_pct(), baseline.loss_pct(),
                  ablated.loss_pct(), baseline.tie_pct(), ablated.tie_pct());
    table << line;
    report.stats = ablated;
  }

  if (cfg.eval.save_replays) {
    ensure_dir(cfg.out + "/replays");
    for (std::size_t i = 0; i < replays.size(); ++i) {
      std::ostringstream name;
      name << cfg.out << "/replays/game_" << i << ".replay";
      replays[i].save(name.str());
    }
  }

  RunManifest manifest;
  manifest.command = "eval";
  manifest.config_path = config_path;
  manifest.seed = cfg.seed;
  manifest.out_dir = cfg.out;
  hash_input(manifest, config_path);
  ScriptedKind ignored;
  if (!parse_scripted_kind(cfg.eval.checkpoint, &ignored))
    hash_input(manifest, cfg.eval.checkpoint);
  if (!parse_scripted_kind(cfg.eval.opponent, &ignored))
    hash_input(manifest, cfg.eval.opponent);
  write_manifest(manifest);

  report.stats_dir = cfg.out;
  report.table = table.str();
  return report;
}

ReplayReport run_replay(const std::string& replay_path, bool render) {
  Replay replay = Replay::load(replay_path);
  std::ostringstream rendered;
  ReplayVerification v = verify_replay(
      replay, render ? std::function<void(const GameState&, const ReplayTick&)>(
                           [&](const GameState& st, const ReplayTick&) {
                             rendered << render_ascii(st) << "\n";
                           })
                     : nullptr);
  ReplayReport report;
  report.verified = v.ok;
  report.first_divergent_tick = v.first_divergent_tick;
  report.final_tick = v.final_tick;
  report.result = static_cast<int>(v.result);
  report.detail = v.detail;
  report.render = rendered.str();
  return report;
}

}  // namespace teamradio

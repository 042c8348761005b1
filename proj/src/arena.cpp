// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/arena.hpp"

#include <algorithm>
#include <atomic>
#include <bitset>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "teamradio/guard.hpp"
#include "teamradio/radio.hpp"

namespace teamradio {

namespace {

int class_of(const GameSummary& g) { return g.won ? 0 : g.lost ? 1 : 2; }

// Shared between live matches and replay re-derivation so both produce the
// same numbers.
struct StatsCollector {
  GameSummary s;
  std::array<std::bitset<kNumCells>, 2> seen;
  std::array<int, 2> agent_ids{};

  void start(int learner_team) {
    s.learner_team = learner_team;
    agent_ids = {learner_team, learner_team + 2};
  }

  int slot_of(int agent_id) const {
    return agent_id == agent_ids[0] ? 0 : agent_id == agent_ids[1] ? 1 : -1;
  }

  void after_step(const GameState& state, const EventList& events) {
    for (const Event& e : events) {
      if (e.kind == EventKind::BombPlaced && slot_of(e.agent) >= 0)
        ++s.bombs_placed[cell_index(e.pos)];
    }
    for (int k = 0; k < 2; ++k) {
      const AgentState& a = state.agents[agent_ids[k]];
      if (!a.alive) continue;
      ++s.ticks_alive[k];
      ++s.visits[cell_index(a.pos)];
      seen[k].set(cell_index(a.pos));
    }
  }

  void finish(const GameState& state, int max_ticks) {
    s.raw_result = state.result;
    s.length = state.tick;
    s.timeout = state.tick >= max_ticks;
    GameResult learner_win =
        s.learner_team == 0 ? GameResult::Team0Win : GameResult::Team1Win;
    GameResult learner_loss =
        s.learner_team == 0 ? GameResult::Team1Win : GameResult::Team0Win;
    s.won = state.result == learner_win;
    s.lost = state.result == learner_loss;
    s.tied = state.result == GameResult::Tie;
    s.teammate_died = !(state.agents[agent_ids[0]].alive && state.agents[agent_ids[1]].alive);
    for (int k = 0; k < 2; ++k) s.unique_cells[k] = static_cast<int>(seen[k].count());
  }
};

struct PolicyDriver {
  const PolicyNet<float>* net = nullptr;
  BeliefState belief;
  Rng rng{0};
  EncodeOptions enc_opts;
  bool use_filter = true;
  bool record = false;
};

int enemies_dead_of(const GameState& state, int team) {
  int dead = 0;
  for (const AgentState& a : state.agents)
    if (a.team != team && !a.alive) ++dead;
  return dead;
}

}  // namespace

std::vector<int> schedule_batch(const std::vector<PoolEntry>& pool, int n_games, Rng& rng) {
  validate_pool(pool);
  std::vector<int> out(n_games);
  for (int g = 0; g < n_games; ++g) {
    int roll = static_cast<int>(rng.below(100));
    int acc = 0;
    int pick = static_cast<int>(pool.size()) - 1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      acc += pool[i].weight;
      if (roll < acc) {
        pick = static_cast<int>(i);
        break;
      }
    }
    out[g] = pick;
  }
  return out;
}

Opponent resolve_pool_entry(const PoolEntry& entry, const SnapshotRegistry& snapshots,
                            Rng& rng) {
  Opponent opp;
  if (entry.opponent == "snapshot") {
    if (snapshots.empty()) {
      // No frozen policy yet: the slot degrades to the easiest scripted foe.
      opp.type = Opponent::Type::Scripted;
      opp.scripted_kind = ScriptedKind::Static;
      opp.label = "snapshot";
      return opp;
    }
    opp.type = Opponent::Type::Snapshot;
    opp.snapshot = snapshots.pick(rng);
    opp.label = "snapshot";
    return opp;
  }
  ScriptedKind kind;
  if (!parse_scripted_kind(entry.opponent, &kind))
    throw std::runtime_error("unknown opponent '" + entry.opponent + "'");
  opp.type = Opponent::Type::Scripted;
  opp.scripted_kind = kind;
  opp.label = entry.opponent;
  return opp;
}

MatchOutcome run_match(const SideSpec& learner, const SideSpec& opponent,
                       uint64_t match_seed, const EngineConfig& engine_cfg,
                       const ScriptedConfig& scripted_cfg, const MatchOptions& opts) {
  EngineConfig engine = engine_cfg;
  if (opts.max_ticks_override > 0) engine.max_ticks = opts.max_ticks_override;

  Rng meta(derive_seed(match_seed, 0));
  const int learner_team = static_cast<int>(meta.below(2));
  const uint64_t board_seed = derive_seed(match_seed, 1);

  GameState state = generate_board(board_seed, engine);

  MatchOutcome out;
  out.replay.seed = board_seed;
  out.replay.engine = engine;
  out.replay.radio_team = learner_team;

  StatsCollector stats;
  stats.start(learner_team);

  std::array<PolicyDriver, kNumAgents> drivers;
  std::array<std::unique_ptr<ScriptedAgent>, kNumAgents> scripted;
  for (int id = 0; id < kNumAgents; ++id) {
    const bool on_learner_side = team_of(id) == learner_team;
    const SideSpec& side = on_learner_side ? learner : opponent;
    if (side.type == SideSpec::Type::Policy) {
      PolicyDriver& d = drivers[id];
      d.net = side.policy;
      d.rng = Rng(derive_seed(match_seed, 16 + id));
      d.enc_opts = on_learner_side ? opts.encode : EncodeOptions{};
      d.use_filter = on_learner_side ? opts.use_filter : true;
      d.record = on_learner_side;
    } else {
      scripted[id] = std::make_unique<ScriptedAgent>(
          side.scripted_kind, derive_seed(match_seed, 32 + id), scripted_cfg);
    }
  }

  for (int k = 0; k < 2; ++k) {
    Trajectory& t = out.trajectories[k];
    t.agent_id = stats.agent_ids[k];
    t.encode_opts = opts.encode;
  }
  std::array<bool, 2> traj_done = {false, false};

  static thread_local PolicyNet<float>::Workspace ws;
  std::vector<float> obs_batch(static_cast<std::size_t>(kNumAgents) * kObsValues);

  while (state.result == GameResult::Ongoing) {
    std::array<Action, kNumAgents> actions{};
    std::array<Message, kNumAgents> messages{};

    // Policy agents are batched through one forward pass per tick.
    struct PendingEval {
      int agent;
      RawObservation obs;
      ActionMask mask;
    };
    std::array<PendingEval, kNumAgents> pending;
    int n_pending = 0;
    for (int id = 0; id < kNumAgents; ++id) {
      if (!state.agents[id].alive) continue;
      RawObservation obs = observe(state, id, engine);
      if (drivers[id].net != nullptr) {
        PolicyDriver& d = drivers[id];
        d.belief.update(obs, obs.tick);
        ActionMask mask = d.use_filter ? compute_mask(obs, engine) : ActionMask::all_allowed();
        EncodedObservation enc = encode(obs, d.belief, obs.inbox, engine, d.enc_opts);
        if (d.enc_opts.no_belief) {
          for (int c = kChBeliefFirst; c <= kChBeliefValid; ++c)
            for (int i = 0; i < kNumCells; ++i)
              if (enc.at(c, i) != 0.0f)
                throw std::logic_error("no_belief ablation left a nonzero belief channel");
        }
        if (d.enc_opts.no_comm) {
          for (int c = kChAgentPos0; c < kChAgentPos0 + kNumAgents; ++c)
            for (int i = 0; i < kNumCells; ++i)
              if (enc.at(c, i) != 0.0f && enc.at(c, i) != 1.0f)
                throw std::logic_error("no_comm ablation left radio-derived position mass");
        }
        std::copy(enc.v.begin(), enc.v.end(),
                  obs_batch.data() + static_cast<std::size_t>(n_pending) * kObsValues);
        pending[n_pending++] = PendingEval{id, std::move(obs), mask};
        if (!d.enc_opts.no_comm) messages[id] = encode_message(summarize(pending[n_pending - 1].obs));
      } else if (scripted[id]) {
        actions[id] = scripted[id]->act(obs, engine);
      }
    }
    if (n_pending > 0) {
      std::array<std::array<double, kNumActions>, kNumAgents> batch_logits;
      std::array<float, kNumAgents> batch_values;
      const PolicyNet<float>* net = drivers[pending[0].agent].net;
      bool same_net = true;
      for (int i = 1; i < n_pending; ++i)
        same_net = same_net && drivers[pending[i].agent].net == net;
      if (same_net) {
        net->forward(obs_batch.data(), n_pending, ws);
        for (int i = 0; i < n_pending; ++i) {
          for (int r = 0; r < kNumActions; ++r) batch_logits[i][r] = ws.logits(r, i);
          batch_values[i] = ws.value(0, i);
        }
      } else {
        // Mixed nets (snapshot opponents): evaluate per agent.
        static thread_local PolicyNet<float>::Workspace ws_one;
        for (int i = 0; i < n_pending; ++i) {
          drivers[pending[i].agent].net->forward(
              obs_batch.data() + static_cast<std::size_t>(i) * kObsValues, 1, ws_one);
          for (int r = 0; r < kNumActions; ++r) batch_logits[i][r] = ws_one.logits(r, 0);
          batch_values[i] = ws_one.value(0, 0);
        }
      }
      for (int i = 0; i < n_pending; ++i) {
        PolicyDriver& d = drivers[pending[i].agent];
        MaskedDist dist = masked_distribution(batch_logits[i], pending[i].mask);
        int a = sample_action(dist, d.rng);
        actions[pending[i].agent] = static_cast<Action>(a);
        int slot = stats.slot_of(pending[i].agent);
        if (d.record && slot >= 0 && !traj_done[slot]) {
          TrajStep step;
          step.obs = pending[i].obs;
          step.mask = pending[i].mask;
          step.action = static_cast<uint8_t>(a);
          step.behavior_logp = static_cast<float>(dist.logp_unmasked[a]);
          step.value = batch_values[i];
          step.sent = messages[pending[i].agent];
          out.trajectories[slot].steps.push_back(std::move(step));
        }
        if (slot >= 0) out.summary.value_by_tick[slot].push_back(batch_values[i]);
      }
    }

    std::array<bool, kNumAgents> alive_before;
    for (int id = 0; id < kNumAgents; ++id) alive_before[id] = state.agents[id].alive;
    EventList events = step(state, actions, messages, engine);
    out.replay.record(actions, messages, state);
    stats.after_step(state, events);

    // Close trajectories at agent death or game end.
    for (int k = 0; k < 2; ++k) {
      if (traj_done[k]) continue;
      int id = stats.agent_ids[k];
      bool died = alive_before[id] && !state.agents[id].alive;
      bool game_over = state.result != GameResult::Ongoing;
      if (!died && !game_over) continue;
      Trajectory& t = out.trajectories[k];
      t.summary.enemies_dead = enemies_dead_of(state, learner_team);
      t.summary.self_alive = state.agents[id].alive;
      t.summary.tick = state.tick;
      t.terminal_reward = shape_reward(t.summary);
      out.summary.shaped_reward[k] = t.terminal_reward;
      traj_done[k] = true;
    }
  }

  out.replay.finish(state);
  stats.finish(state, engine.max_ticks);
  out.summary.visits = stats.s.visits;
  out.summary.bombs_placed = stats.s.bombs_placed;
  out.summary.unique_cells = stats.s.unique_cells;
  out.summary.ticks_alive = stats.s.ticks_alive;
  out.summary.raw_result = stats.s.raw_result;
  out.summary.learner_team = stats.s.learner_team;
  out.summary.length = stats.s.length;
  out.summary.timeout = stats.s.timeout;
  out.summary.won = stats.s.won;
  out.summary.lost = stats.s.lost;
  out.summary.tied = stats.s.tied;
  out.summary.teammate_died = stats.s.teammate_died;
  if (!opts.keep_trajectories) {
    out.trajectories[0].steps.clear();
    out.trajectories[1].steps.clear();
  }
  return out;
}

void MatchStats::fold(const GameSummary& g, int max_ticks) {
  ++games;
  int cls = class_of(g);
  wins += g.won;
  losses += g.lost;
  ties += g.tied;
  if (g.length < max_ticks) game_lengths[cls].push_back(g.length);
  for (int k = 0; k < 2; ++k) {
    if (g.ticks_alive[k] > 0)
      unique_cells_per_tick.push_back(static_cast<double>(g.unique_cells[k]) /
                                      static_cast<double>(g.ticks_alive[k]));
    for (std::size_t t = 0; t < g.value_by_tick[k].size(); ++t) {
      if (value_hist.size() <= t) value_hist.resize(t + 1);
      float v = g.value_by_tick[k][t];
      int bin = static_cast<int>((static_cast<double>(v) + 1.0) / 2.0 * kValueBins);
      bin = std::clamp(bin, 0, kValueBins - 1);
      ++value_hist[t][cls][bin];
    }
  }
  for (int i = 0; i < kNumCells; ++i) {
    visits[i] += g.visits[i];
    bombs_placed[i] += g.bombs_placed[i];
  }
  ++teammate_split[g.teammate_died ? 1 : 0][cls];
}

std::string MatchStats::table(const std::string& title) const {
  std::ostringstream out;
  out << "== " << title << " ==\n";
  char line[160];
  std::snprintf(line, sizeof line, "games %d  W %.1f%%  L %.1f%%  T %.1f%%\n", games,
                win_pct(), loss_pct(), tie_pct());
  out << line;
  const char* names[3] = {"win", "loss", "tie"};
  for (int c = 0; c < 3; ++c) {
    const auto& v = game_lengths[c];
    double mean = 0.0;
    for (uint16_t x : v) mean += x;
    if (!v.empty()) mean /= static_cast<double>(v.size());
    std::snprintf(line, sizeof line, "length[%s]  n=%zu  mean=%.1f (timeouts excluded)\n",
                  names[c], v.size(), mean);
    out << line;
  }
  double uniq = 0.0;
  for (double x : unique_cells_per_tick) uniq += x;
  if (!unique_cells_per_tick.empty()) uniq /= static_cast<double>(unique_cells_per_tick.size());
  std::snprintf(line, sizeof line, "unique cells per alive tick  mean=%.4f  n=%zu\n", uniq,
                unique_cells_per_tick.size());
  out << line;
  std::snprintf(line, sizeof line,
                "teammate alive: W %d L %d T %d   teammate died: W %d L %d T %d\n",
                teammate_split[0][0], teammate_split[0][1], teammate_split[0][2],
                teammate_split[1][0], teammate_split[1][1], teammate_split[1][2]);
  out << line;
  return out.str();
}

void MatchStats::write_files(const std::string& dir, const std::string& prefix) const {
  auto path = [&](const std::string& name) { return dir + "/" + prefix + "_" + name; };
  {
    std::ofstream f(path("results.csv"));
    f << "games,wins,losses,ties,win_pct,loss_pct,tie_pct\n";
    f << games << ',' << wins << ',' << losses << ',' << ties << ',' << win_pct() << ','
      << loss_pct() << ',' << tie_pct() << "\n";
  }
  {
    std::ofstream f(path("lengths.csv"));
    f << "result,length\n";
    const char* names[3] = {"win", "loss", "tie"};
    for (int c = 0; c < 3; ++c)
      for (uint16_t v : game_lengths[c]) f << names[c] << ',' << v << "\n";
  }
  {
    std::ofstream f(path("unique_cells.csv"));
    f << "unique_cells_per_alive_tick\n";
    for (double v : unique_cells_per_tick) f << v << "\n";
  }
  auto grid = [&](const std::string& name, const std::array<uint64_t, kNumCells>& data) {
    std::ofstream f(path(name));
    for (int r = 0; r < kBoardSize; ++r) {
      for (int c = 0; c < kBoardSize; ++c) {
        if (c) f << ',';
        f << data[cell_index(r, c)];
      }
      f << "\n";
    }
  };
  grid("visits.csv", visits);
  grid("bombs.csv", bombs_placed);
  {
    std::ofstream f(path("value_hist.csv"));
    f << "tick,result,bin_low,count\n";
    const char* names[3] = {"win", "loss", "tie"};
    for (std::size_t t = 0; t < value_hist.size(); ++t)
      for (int c = 0; c < 3; ++c)
        for (int b = 0; b < kValueBins; ++b)
          if (value_hist[t][c][b])
            f << t << ',' << names[c] << ',' << (-1.0 + 2.0 * b / kValueBins) << ','
              << value_hist[t][c][b] << "\n";
  }
  {
    std::ofstream f(path("teammate_split.csv"));
    f << "teammate,wins,losses,ties\n";
    f << "alive," << teammate_split[0][0] << ',' << teammate_split[0][1] << ','
      << teammate_split[0][2] << "\n";
    f << "died," << teammate_split[1][0] << ',' << teammate_split[1][1] << ','
      << teammate_split[1][2] << "\n";
  }
}

EncodeOptions ablation_options(AblationMode mode) {
  EncodeOptions opts;
  if (mode == AblationMode::NoComm) opts.no_comm = true;
  if (mode == AblationMode::NoBelief) opts.no_belief = true;
  return opts;
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

int default_workers(int configured) {
  if (configured > 0) return configured;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

MatchStats evaluate(const SideSpec& learner, const SideSpec& opponent, int n_games,
                    uint64_t seed, const EngineConfig& engine_cfg,
                    const ScriptedConfig& scripted_cfg, AblationMode mode, int workers,
                    std::vector<Replay>* replays_out) {
  if (n_games < 1) throw std::runtime_error("evaluate: n_games must be >= 1");
  MatchOptions opts;
  opts.encode = ablation_options(mode);
  opts.keep_trajectories = false;
  std::vector<GameSummary> summaries(n_games);
  if (replays_out) replays_out->resize(n_games);
  parallel_for(n_games, workers, [&](int i) {
    MatchOutcome out = run_match(learner, opponent, derive_seed(seed, 100 + i), engine_cfg,
                                 scripted_cfg, opts);
    summaries[i] = std::move(out.summary);
    if (replays_out) (*replays_out)[i] = std::move(out.replay);
  });
  MatchStats stats;
  for (const GameSummary& s : summaries) stats.fold(s, engine_cfg.max_ticks);
  return stats;
}

GameSummary summary_from_replay(const Replay& replay, const SideSpec& learner,
                                const MatchOptions& opts) {
  GameState state = generate_board(replay.seed, replay.engine);
  StatsCollector stats;
  stats.start(replay.radio_team);

  std::array<PolicyDriver, 2> drivers;
  const bool with_policy = learner.type == SideSpec::Type::Policy;
  for (int k = 0; k < 2; ++k) {
    drivers[k].net = with_policy ? learner.policy : nullptr;
    drivers[k].enc_opts = opts.encode;
  }
  static thread_local PolicyNet<float>::Workspace ws;
  GameSummary summary;

  for (const ReplayTick& tick : replay.ticks) {
    if (state.result != GameResult::Ongoing)
      throw std::runtime_error("summary_from_replay: replay overruns game end");
    if (with_policy) {
      for (int k = 0; k < 2; ++k) {
        int id = stats.agent_ids[k];
        if (!state.agents[id].alive) continue;
        RawObservation obs = observe(state, id, replay.engine);
        drivers[k].belief.update(obs, obs.tick);
        EncodedObservation enc =
            encode(obs, drivers[k].belief, obs.inbox, replay.engine, drivers[k].enc_opts);
        drivers[k].net->forward(enc.v.data(), 1, ws);
        summary.value_by_tick[k].push_back(ws.value(0, 0));
      }
    }
    std::array<Message, kNumAgents> msgs{};
    msgs[stats.agent_ids[0]] = tick.messages[0];
    msgs[stats.agent_ids[1]] = tick.messages[1];
    EventList events = step(state, tick.actions, msgs, replay.engine);
    stats.after_step(state, events);
  }
  stats.finish(state, replay.engine.max_ticks);
  summary.raw_result = stats.s.raw_result;
  summary.learner_team = stats.s.learner_team;
  summary.length = stats.s.length;
  summary.timeout = stats.s.timeout;
  summary.won = stats.s.won;
  summary.lost = stats.s.lost;
  summary.tied = stats.s.tied;
  summary.teammate_died = stats.s.teammate_died;
  summary.unique_cells = stats.s.unique_cells;
  summary.ticks_alive = stats.s.ticks_alive;
  summary.visits = stats.s.visits;
  summary.bombs_placed = stats.s.bombs_placed;
  return summary;
}

}  // namespace teamradio

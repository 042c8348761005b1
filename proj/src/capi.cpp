// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "json.hpp"
#include "teamradio/arena.hpp"
#include "teamradio/engine.hpp"
#include "teamradio/guard.hpp"
#include "teamradio/learn.hpp"
#include "teamradio/percept.hpp"
#include "teamradio/pipeline.hpp"
#include "teamradio/radio.hpp"
#include "teamradio/scripted.hpp"

using namespace teamradio;

namespace {

thread_local std::string g_last_error;

tr_status fail(tr_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

tr_status from_exception() {
  try {
    throw;
  } catch (const TrainingDiverged& e) {
    return fail(TR_ERR_DIVERGED, e.what());
  } catch (const std::logic_error& e) {
    return fail(TR_ERR_BAD_STATE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TR_ERR_IO, e.what());
  } catch (...) {
    return fail(TR_ERR_INTERNAL, "unknown error");
  }
}

EngineConfig engine_from_json(const char* config_json) {
  if (config_json == nullptr || config_json[0] == '\0') return EngineConfig{};
  // Accept either the full config document or just its "engine" section.
  nlohmann::json j = nlohmann::json::parse(config_json);
  nlohmann::json wrapped;
  wrapped["engine"] = j.contains("engine") ? j["engine"] : j;
  return parse_run_config(wrapped.dump()).engine;
}

RunConfig config_from_json(const char* config_json) {
  return parse_run_config(config_json ? std::string(config_json) : std::string());
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct tr_game {
  GameState state;
  EngineConfig cfg;
};

struct tr_encoder {
  int agent = 0;
  EngineConfig cfg;
  BeliefState belief;
};

struct tr_scripted {
  ScriptedAgent agent;
  EngineConfig cfg;
};

struct tr_policy {
  PolicyNet<float> net;
  mutable PolicyNet<float>::Workspace ws;
};

extern "C" {

const char* tr_status_name(tr_status status) {
  switch (status) {
    case TR_OK: return "ok";
    case TR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TR_ERR_BAD_STATE: return "bad state";
    case TR_ERR_IO: return "io error";
    case TR_ERR_UNKNOWN_SYMBOL: return "unknown symbol";
    case TR_ERR_DIVERGED: return "training diverged";
    case TR_ERR_INTERNAL: return "internal error";
  }
  return "?";
}

const char* tr_last_error(void) { return g_last_error.c_str(); }

uint32_t tr_version(void) { return 10000; }  // 1.0.0

tr_status tr_game_create(uint64_t seed, const char* config_json, tr_game** out) {
  if (out == nullptr) return fail(TR_ERR_INVALID_ARGUMENT, "out is null");
  try {
    auto game = new tr_game;
    game->cfg = engine_from_json(config_json);
    game->state = generate_board(seed, game->cfg);
    *out = game;
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

void tr_game_destroy(tr_game* game) { delete game; }

tr_status tr_game_step(tr_game* game, const uint8_t actions[TR_NUM_AGENTS],
                       const uint8_t* messages) {
  if (game == nullptr || actions == nullptr)
    return fail(TR_ERR_INVALID_ARGUMENT, "null argument");
  try {
    std::array<Action, kNumAgents> a{};
    std::array<Message, kNumAgents> m{};
    for (int i = 0; i < kNumAgents; ++i) {
      if (actions[i] >= kNumActions) return fail(TR_ERR_INVALID_ARGUMENT, "bad action code");
      a[i] = static_cast<Action>(actions[i]);
      if (messages) m[i] = Message{messages[2 * i], messages[2 * i + 1]};
    }
    step(game->state, a, m, game->cfg);
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

int tr_game_tick(const tr_game* game) { return game ? game->state.tick : -1; }

int tr_game_result(const tr_game* game) {
  return game ? static_cast<int>(game->state.result) : -1;
}

int tr_game_agent_alive(const tr_game* game, int agent) {
  if (game == nullptr || agent < 0 || agent >= kNumAgents) return -1;
  return game->state.agents[agent].alive ? 1 : 0;
}

uint64_t tr_game_state_hash(const tr_game* game) {
  return game ? state_hash(game->state) : 0;
}

tr_status tr_game_env_reward(const tr_game* game, int agent, int* out) {
  if (game == nullptr || out == nullptr || agent < 0 || agent >= kNumAgents)
    return fail(TR_ERR_INVALID_ARGUMENT, "bad argument");
  try {
    *out = env_reward(game->state, agent);
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_game_render(const tr_game* game, char* buf, size_t cap, size_t* written) {
  if (game == nullptr || buf == nullptr) return fail(TR_ERR_INVALID_ARGUMENT, "null argument");
  std::string text = render_ascii(game->state);
  size_t n = std::min(cap > 0 ? cap - 1 : 0, text.size());
  std::memcpy(buf, text.data(), n);
  if (cap > 0) buf[n] = '\0';
  if (written) *written = n;
  return n == text.size() ? TR_OK : fail(TR_ERR_INVALID_ARGUMENT, "buffer too small");
}

tr_status tr_radio_encode(int enemy_a_quadrant, int enemy_b_quadrant, int self_half,
                          uint8_t out_words[2]) {
  if (out_words == nullptr || enemy_a_quadrant < 0 || enemy_a_quadrant > 4 ||
      enemy_b_quadrant < 0 || enemy_b_quadrant > 4 || self_half < 0 || self_half > 1)
    return fail(TR_ERR_INVALID_ARGUMENT, "bad coarse info");
  CoarseInfo info{static_cast<Quadrant>(enemy_a_quadrant),
                  static_cast<Quadrant>(enemy_b_quadrant), static_cast<BoardHalf>(self_half)};
  Message m = encode_message(info);
  out_words[0] = m.word1;
  out_words[1] = m.word2;
  return TR_OK;
}

tr_status tr_radio_decode(uint8_t word1, uint8_t word2, int* enemy_a_quadrant,
                          int* enemy_b_quadrant, int* self_half) {
  auto info = decode_message(Message{word1, word2});
  if (!info) return fail(TR_ERR_UNKNOWN_SYMBOL, "reserved or malformed radio code");
  if (enemy_a_quadrant) *enemy_a_quadrant = static_cast<int>(info->enemy_a);
  if (enemy_b_quadrant) *enemy_b_quadrant = static_cast<int>(info->enemy_b);
  if (self_half) *self_half = static_cast<int>(info->self_half);
  return TR_OK;
}

tr_status tr_encoder_create(int agent, const char* config_json, tr_encoder** out) {
  if (out == nullptr || agent < 0 || agent >= kNumAgents)
    return fail(TR_ERR_INVALID_ARGUMENT, "bad agent id");
  try {
    auto enc = new tr_encoder;
    enc->agent = agent;
    enc->cfg = engine_from_json(config_json);
    *out = enc;
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

void tr_encoder_destroy(tr_encoder* encoder) { delete encoder; }

tr_status tr_encoder_encode(tr_encoder* encoder, const tr_game* game, unsigned flags,
                            float out_obs[TR_OBS_VALUES], uint8_t out_mask[TR_NUM_ACTIONS]) {
  if (encoder == nullptr || game == nullptr || out_obs == nullptr)
    return fail(TR_ERR_INVALID_ARGUMENT, "null argument");
  try {
    RawObservation obs = observe(game->state, encoder->agent, encoder->cfg);
    encoder->belief.update(obs, obs.tick);
    EncodeOptions opts;
    opts.no_comm = (flags & TR_ENCODE_NO_COMM) != 0;
    opts.no_belief = (flags & TR_ENCODE_NO_BELIEF) != 0;
    EncodedObservation enc = encode(obs, encoder->belief, obs.inbox, encoder->cfg, opts);
    std::memcpy(out_obs, enc.v.data(), sizeof(float) * kObsValues);
    if (out_mask) {
      ActionMask mask = compute_mask(obs, encoder->cfg);
      for (int i = 0; i < kNumActions; ++i) out_mask[i] = mask.allowed[i] ? 1 : 0;
    }
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_encoder_message(const tr_encoder* encoder, const tr_game* game,
                             uint8_t out_words[2]) {
  if (encoder == nullptr || game == nullptr || out_words == nullptr)
    return fail(TR_ERR_INVALID_ARGUMENT, "null argument");
  try {
    RawObservation obs = observe(game->state, encoder->agent, encoder->cfg);
    Message m = encode_message(summarize(obs));
    out_words[0] = m.word1;
    out_words[1] = m.word2;
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_mask_compute(const tr_game* game, int agent,
                          uint8_t out_mask[TR_NUM_ACTIONS]) {
  if (game == nullptr || out_mask == nullptr || agent < 0 || agent >= kNumAgents)
    return fail(TR_ERR_INVALID_ARGUMENT, "bad argument");
  try {
    RawObservation obs = observe(game->state, agent, game->cfg);
    ActionMask mask = compute_mask(obs, game->cfg);
    for (int i = 0; i < kNumActions; ++i) out_mask[i] = mask.allowed[i] ? 1 : 0;
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_scripted_create(int kind, uint64_t seed, tr_scripted** out) {
  if (out == nullptr || kind < 0 || kind > TR_SCRIPTED_SMART_SIMPLE_NOBOMB)
    return fail(TR_ERR_INVALID_ARGUMENT, "bad scripted kind");
  try {
    *out = new tr_scripted{ScriptedAgent(static_cast<ScriptedKind>(kind), seed),
                           EngineConfig{}};
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

void tr_scripted_destroy(tr_scripted* agent) { delete agent; }

tr_status tr_scripted_act(tr_scripted* agent, const tr_game* game, int agent_id,
                          uint8_t* out_action) {
  if (agent == nullptr || game == nullptr || out_action == nullptr || agent_id < 0 ||
      agent_id >= kNumAgents)
    return fail(TR_ERR_INVALID_ARGUMENT, "bad argument");
  try {
    RawObservation obs = observe(game->state, agent_id, game->cfg);
    *out_action = static_cast<uint8_t>(agent->agent.act(obs, game->cfg));
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_policy_load(const char* path, tr_policy** out) {
  if (path == nullptr || out == nullptr) return fail(TR_ERR_INVALID_ARGUMENT, "null argument");
  try {
    *out = new tr_policy{load_checkpoint(path), {}};
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

void tr_policy_destroy(tr_policy* policy) { delete policy; }

tr_status tr_policy_save(const tr_policy* policy, const char* path) {
  if (policy == nullptr || path == nullptr)
    return fail(TR_ERR_INVALID_ARGUMENT, "null argument");
  try {
    save_checkpoint(path, policy->net, "{}");
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_policy_eval(const tr_policy* policy, const float obs[TR_OBS_VALUES],
                         const uint8_t mask[TR_NUM_ACTIONS],
                         float out_probs[TR_NUM_ACTIONS], float* out_value) {
  if (policy == nullptr || obs == nullptr)
    return fail(TR_ERR_INVALID_ARGUMENT, "null argument");
  try {
    policy->net.forward(obs, 1, policy->ws);
    ActionMask m = ActionMask::all_allowed();
    if (mask) {
      for (int i = 0; i < kNumActions; ++i) m.allowed[i] = mask[i] != 0;
      if (m.count() == 0) return fail(TR_ERR_INVALID_ARGUMENT, "all-zero mask");
    }
    std::array<double, kNumActions> z;
    for (int i = 0; i < kNumActions; ++i) z[i] = policy->ws.logits(i, 0);
    MaskedDist dist = masked_distribution(z, m);
    if (out_probs)
      for (int i = 0; i < kNumActions; ++i) out_probs[i] = static_cast<float>(dist.probs[i]);
    if (out_value) *out_value = policy->ws.value(0, 0);
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_policy_act(const tr_policy* policy, const float obs[TR_OBS_VALUES],
                        const uint8_t mask[TR_NUM_ACTIONS], uint64_t* rng_state,
                        uint8_t* out_action) {
  if (policy == nullptr || obs == nullptr || rng_state == nullptr || out_action == nullptr)
    return fail(TR_ERR_INVALID_ARGUMENT, "null argument");
  try {
    float probs[TR_NUM_ACTIONS];
    tr_status st = tr_policy_eval(policy, obs, mask, probs, nullptr);
    if (st != TR_OK) return st;
    double u = static_cast<double>(splitmix64(*rng_state) >> 11) * 0x1.0p-53;
    double cum = 0.0;
    int pick = 0;
    for (int i = 0; i < kNumActions; ++i) {
      if (probs[i] <= 0.0f) continue;
      pick = i;
      cum += probs[i];
      if (u < cum) break;
    }
    *out_action = static_cast<uint8_t>(pick);
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_run_gen_imitation(const char* config_json, const char* config_path) {
  try {
    RunConfig cfg = config_from_json(config_json);
    run_gen_imitation(cfg, config_path ? config_path : "");
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_run_train(const char* config_json, const char* config_path,
                       const char* init_checkpoint) {
  try {
    RunConfig cfg = config_from_json(config_json);
    run_train(cfg, config_path ? config_path : "", init_checkpoint ? init_checkpoint : "");
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_run_eval(const char* config_json, const char* config_path, char** out_report) {
  try {
    RunConfig cfg = config_from_json(config_json);
    EvalReport report = run_eval(cfg, config_path ? config_path : "");
    if (out_report) {
      nlohmann::json j;
      j["games"] = report.stats.games;
      j["win_pct"] = report.stats.win_pct();
      j["loss_pct"] = report.stats.loss_pct();
      j["tie_pct"] = report.stats.tie_pct();
      j["stats_dir"] = report.stats_dir;
      j["table"] = report.table;
      *out_report = dup_string(j.dump(2));
    }
    return TR_OK;
  } catch (...) {
    return from_exception();
  }
}

tr_status tr_run_replay(const char* replay_path, int render, char** out_report) {
  if (replay_path == nullptr) return fail(TR_ERR_INVALID_ARGUMENT, "null path");
  try {
    ReplayReport report = run_replay(replay_path, render != 0);
    if (out_report) {
      nlohmann::json j;
      j["verified"] = report.verified;
      j["first_divergent_tick"] = report.first_divergent_tick;
      j["final_tick"] = report.final_tick;
      j["result"] = report.result;
      j["detail"] = report.detail;
      if (render) j["render"] = report.render;
      *out_report = dup_string(j.dump(2));
    }
    return report.verified ? TR_OK : fail(TR_ERR_BAD_STATE, "replay diverged: " + report.detail);
  } catch (...) {
    return from_exception();
  }
}

void tr_string_free(char* s) { delete[] s; }

}  // extern "C"

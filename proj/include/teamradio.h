/* Copyright 2026 The TeamRadio Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API for the TeamRadio toolkit: a deterministic Pommerman TeamRadio
 * engine, the fixed radio protocol, observation encoding with belief memory,
 * the safety action filter, scripted opponents, policy inference, and the
 * batch pipeline (imitation data generation, training, evaluation, replay
 * verification).
 *
 * All functions returning tr_status set a thread-local error message
 * readable via tr_last_error() on failure. Handles are opaque; destroy
 * functions accept NULL.
 */

#ifndef TEAMRADIO_H_
#define TEAMRADIO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TEAMRADIO_API __declspec(dllexport)
#else
#define TEAMRADIO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tr_status {
  TR_OK = 0,
  TR_ERR_INVALID_ARGUMENT = 1,
  TR_ERR_BAD_STATE = 2,       /* e.g. stepping a finished game */
  TR_ERR_IO = 3,              /* file missing/unwritable/corrupt */
  TR_ERR_UNKNOWN_SYMBOL = 4,  /* reserved radio code */
  TR_ERR_DIVERGED = 5,        /* non-finite training loss */
  TR_ERR_INTERNAL = 6
} tr_status;

TEAMRADIO_API const char* tr_status_name(tr_status status);
TEAMRADIO_API const char* tr_last_error(void);
TEAMRADIO_API uint32_t tr_version(void);

/* Board geometry and encoding sizes (fixed). */
#define TR_BOARD_SIZE 11
#define TR_NUM_CELLS 121
#define TR_NUM_AGENTS 4
#define TR_NUM_ACTIONS 6
#define TR_OBS_CHANNELS 33
#define TR_OBS_VALUES (TR_OBS_CHANNELS * TR_NUM_CELLS)

/* Actions */
enum { TR_ACTION_STOP = 0, TR_ACTION_UP, TR_ACTION_DOWN, TR_ACTION_LEFT, TR_ACTION_RIGHT, TR_ACTION_BOMB };
/* Game results */
enum { TR_ONGOING = 0, TR_TEAM0_WIN = 1, TR_TEAM1_WIN = 2, TR_TIE = 3 };
/* Quadrants / halves for the radio protocol */
enum { TR_QUAD_NW = 0, TR_QUAD_NE, TR_QUAD_SW, TR_QUAD_SE, TR_QUAD_UNKNOWN };
enum { TR_HALF_TOP = 0, TR_HALF_BOTTOM = 1 };
/* Scripted agent kinds */
enum { TR_SCRIPTED_STATIC = 0, TR_SCRIPTED_SIMPLE, TR_SCRIPTED_SMART_SIMPLE, TR_SCRIPTED_SMART_SIMPLE_NOBOMB };
/* Encoder flags */
enum { TR_ENCODE_NO_COMM = 1, TR_ENCODE_NO_BELIEF = 2 };

typedef struct tr_game tr_game;
typedef struct tr_encoder tr_encoder;
typedef struct tr_scripted tr_scripted;
typedef struct tr_policy tr_policy;

/* ---- engine ---------------------------------------------------------- */

/* config_json: the "engine" section of the config file format, or NULL for
 * defaults (36 rigid / 36 wood / 20 powerups, 10-tick fuse, 2-tick flames,
 * 800 max ticks). */
TEAMRADIO_API tr_status tr_game_create(uint64_t seed, const char* config_json, tr_game** out);
TEAMRADIO_API void tr_game_destroy(tr_game* game);

/* actions: TR_NUM_AGENTS action codes. messages: two words in 1..8 per agent
 * (2*TR_NUM_AGENTS bytes, 0,0 = silence), delivered to the teammate's inbox
 * for the next tick; may be NULL. */
TEAMRADIO_API tr_status tr_game_step(tr_game* game, const uint8_t actions[TR_NUM_AGENTS],
                                     const uint8_t* messages);
TEAMRADIO_API int tr_game_tick(const tr_game* game);
TEAMRADIO_API int tr_game_result(const tr_game* game);
TEAMRADIO_API int tr_game_agent_alive(const tr_game* game, int agent);
TEAMRADIO_API uint64_t tr_game_state_hash(const tr_game* game);
/* +1 / -1 terminal reward; TR_ERR_BAD_STATE while ongoing. */
TEAMRADIO_API tr_status tr_game_env_reward(const tr_game* game, int agent, int* out);
TEAMRADIO_API tr_status tr_game_render(const tr_game* game, char* buf, size_t cap,
                                       size_t* written);

/* ---- radio protocol --------------------------------------------------- */

TEAMRADIO_API tr_status tr_radio_encode(int enemy_a_quadrant, int enemy_b_quadrant,
                                        int self_half, uint8_t out_words[2]);
/* TR_ERR_UNKNOWN_SYMBOL for the 14 reserved codes. */
TEAMRADIO_API tr_status tr_radio_decode(uint8_t word1, uint8_t word2, int* enemy_a_quadrant,
                                        int* enemy_b_quadrant, int* self_half);

/* ---- observation encoding / action filter ----------------------------- */

/* One encoder per agent per game; it owns that agent's belief memory. */
TEAMRADIO_API tr_status tr_encoder_create(int agent, const char* config_json,
                                          tr_encoder** out);
TEAMRADIO_API void tr_encoder_destroy(tr_encoder* encoder);
/* Observes the game for the encoder's agent, updates the belief window,
 * decodes the inbox and writes the 11x11x33 channel-major tensor plus the
 * safety mask (guard filter). flags: TR_ENCODE_*. */
TEAMRADIO_API tr_status tr_encoder_encode(tr_encoder* encoder, const tr_game* game,
                                          unsigned flags, float out_obs[TR_OBS_VALUES],
                                          uint8_t out_mask[TR_NUM_ACTIONS]);
/* The protocol message this agent should transmit now. */
TEAMRADIO_API tr_status tr_encoder_message(const tr_encoder* encoder, const tr_game* game,
                                           uint8_t out_words[2]);
/* Standalone filter without an encoder. */
TEAMRADIO_API tr_status tr_mask_compute(const tr_game* game, int agent,
                                        uint8_t out_mask[TR_NUM_ACTIONS]);

/* ---- scripted agents --------------------------------------------------- */

TEAMRADIO_API tr_status tr_scripted_create(int kind, uint64_t seed, tr_scripted** out);
TEAMRADIO_API void tr_scripted_destroy(tr_scripted* agent);
TEAMRADIO_API tr_status tr_scripted_act(tr_scripted* agent, const tr_game* game,
                                        int agent_id, uint8_t* out_action);

/* ---- policies ---------------------------------------------------------- */

TEAMRADIO_API tr_status tr_policy_load(const char* path, tr_policy** out);
TEAMRADIO_API void tr_policy_destroy(tr_policy* policy);
TEAMRADIO_API tr_status tr_policy_save(const tr_policy* policy, const char* path);
/* Masked action distribution and value estimate for one encoded observation. */
TEAMRADIO_API tr_status tr_policy_eval(const tr_policy* policy,
                                       const float obs[TR_OBS_VALUES],
                                       const uint8_t mask[TR_NUM_ACTIONS],
                                       float out_probs[TR_NUM_ACTIONS], float* out_value);
/* Samples from the masked distribution; rng_state is advanced in place. */
TEAMRADIO_API tr_status tr_policy_act(const tr_policy* policy,
                                      const float obs[TR_OBS_VALUES],
                                      const uint8_t mask[TR_NUM_ACTIONS],
                                      uint64_t* rng_state, uint8_t* out_action);

/* ---- batch pipeline ----------------------------------------------------
 * Each takes the full config file text (JSON; NULL/"" = defaults) and runs
 * one toolkit command end to end, writing its artifacts + manifest into the
 * configured output directory. config_path is provenance for the manifest
 * and may be NULL. */

TEAMRADIO_API tr_status tr_run_gen_imitation(const char* config_json,
                                             const char* config_path);
TEAMRADIO_API tr_status tr_run_train(const char* config_json, const char* config_path,
                                     const char* init_checkpoint);
/* out_report (optional) receives a JSON summary; free with tr_string_free. */
TEAMRADIO_API tr_status tr_run_eval(const char* config_json, const char* config_path,
                                    char** out_report);
/* Verifies a replay file; report JSON includes result, divergence tick and
 * (when render is nonzero) the per-tick ASCII dump. */
TEAMRADIO_API tr_status tr_run_replay(const char* replay_path, int render,
                                      char** out_report);
TEAMRADIO_API void tr_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TEAMRADIO_H_ */

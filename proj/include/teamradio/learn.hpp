// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_LEARN_HPP_
#define TEAMRADIO_LEARN_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "teamradio/config.hpp"
#include "teamradio/dataset.hpp"
#include "teamradio/engine.hpp"
#include "teamradio/net.hpp"
#include "teamradio/percept.hpp"
#include "teamradio/types.hpp"

namespace teamradio {

// Terminal reward shaping: +1.0 when both enemies are dead, +0.5 when exactly
// one enemy died before the trajectory ended, -1.0 when the agent dies (or
// times out) with both enemies alive. Applied per teammate independently.
struct TerminalSummary {
  int enemies_dead = 0;  // 0..2 at the moment the trajectory ends
  bool self_alive = true;
  int tick = 0;
};

double shape_reward(const TerminalSummary& end);

// Action distribution under a safety mask. Sampling and entropy use the
// renormalized masked softmax (masked actions have probability exactly zero);
// the PPO ratio uses the unmasked log-softmax, which equals the unnormalized
// masked probability for every allowed action, so masking both policies
// leaves the ratio of allowed actions untouched.
struct MaskedDist {
  std::array<double, kNumActions> probs{};          // renormalized, masked = 0
  std::array<double, kNumActions> logp_unmasked{};  // log softmax of raw logits
  double entropy = 0.0;
};

MaskedDist masked_distribution(const std::array<double, kNumActions>& logits,
                               const ActionMask& mask);
int sample_action(const MaskedDist& dist, Rng& rng);
int argmax_action(const MaskedDist& dist);

// One learner-agent episode. Observations are kept raw and re-encoded on
// demand: encode() is pure and the belief replays deterministically, which
// keeps a 128-game batch small without quantizing network inputs.
struct TrajStep {
  RawObservation obs;
  ActionMask mask;
  uint8_t action = 0;
  float behavior_logp = 0.0f;
  float value = 0.0f;
  Message sent = kNoMessage;
};

struct Trajectory {
  int agent_id = 0;
  uint64_t game_index = 0;
  std::string opponent;
  std::vector<TrajStep> steps;
  TerminalSummary summary;
  double terminal_reward = 0.0;
  EncodeOptions encode_opts;  // flags active when the steps were recorded
};

// Re-encodes a trajectory's steps by replaying the belief; visitor receives
// (step index, encoded observation).
template <typename F>
void replay_encodings(const Trajectory& traj, const EngineConfig& cfg, F&& visit) {
  BeliefState belief;
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    const RawObservation& obs = traj.steps[i].obs;
    belief.update(obs, obs.tick);
    EncodedObservation enc =
        encode(obs, belief, obs.inbox, cfg, traj.encode_opts);
    visit(i, enc);
  }
}

// Generalized advantage estimation over a terminal-shaped-reward trajectory:
// all step rewards are zero except the last, terminal value bootstraps at 0.
void compute_gae(const Trajectory& traj, double gamma, double lambda,
                 std::vector<double>& advantages, std::vector<double>& returns);

struct PpoMetrics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double mean_ratio = 0.0;
  int steps = 0;
};

class TrainingDiverged : public std::runtime_error {
 public:
  explicit TrainingDiverged(const std::string& what) : std::runtime_error(what) {}
};

// One PPO update over a batch of complete games. Clipped surrogate with value
// loss and entropy bonus; the ratio multiplies the action-filter mask into
// both the current and the behavior policy. Throws TrainingDiverged (with the
// offending quantities in the message) on non-finite loss, leaving params
// untouched.
PpoMetrics ppo_update(PolicyNet<float>& net, Adam<float>& adam,
                      const std::vector<Trajectory>& batch, const TrainConfig& cfg,
                      const EngineConfig& engine_cfg, uint64_t shuffle_seed);

struct ImitationMetrics {
  std::vector<double> train_loss;  // per epoch
  std::vector<double> val_loss;    // per epoch
};

// Supervised seeding: cross-entropy of the masked policy against recorded
// actions, 20% validation split by default. Throws on an empty dataset.
ImitationMetrics imitate(PolicyNet<float>& net, const DatasetReader& dataset,
                         const ImitationConfig& cfg, uint64_t seed);

}  // namespace teamradio

#endif  // TEAMRADIO_LEARN_HPP_

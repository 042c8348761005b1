// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/learn.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

namespace teamradio {

namespace {

constexpr int kChunk = 128;  // GEMM batch granularity

std::array<double, kNumActions> logits_column(
    const PolicyNet<float>::Workspace& ws, int col) {
  std::array<double, kNumActions> z;
  for (int i = 0; i < kNumActions; ++i) z[i] = static_cast<double>(ws.logits(i, col));
  return z;
}

}  // namespace

double shape_reward(const TerminalSummary& end) {
  if (end.enemies_dead >= 2) return 1.0;
  if (end.enemies_dead == 1) return 0.5;
  return -1.0;  // no kills: dying and timing out both score -1
}

MaskedDist masked_distribution(const std::array<double, kNumActions>& logits,
                               const ActionMask& mask) {
  assert(mask.count() >= 1);
  MaskedDist d;
  double m = logits[0];
  for (double z : logits) m = std::max(m, z);
  double lse = 0.0;
  for (double z : logits) lse += std::exp(z - m);
  lse = m + std::log(lse);
  double norm = 0.0;
  for (int i = 0; i < kNumActions; ++i) {
    d.logp_unmasked[i] = logits[i] - lse;
    if (mask.allowed[i]) {
      d.probs[i] = std::exp(d.logp_unmasked[i]);
      norm += d.probs[i];
    }
  }
  for (int i = 0; i < kNumActions; ++i) {
    if (!mask.allowed[i]) continue;
    d.probs[i] /= norm;
    if (d.probs[i] > 0.0) d.entropy -= d.probs[i] * std::log(d.probs[i]);
  }
  return d;
}

int sample_action(const MaskedDist& dist, Rng& rng) {
  double u = rng.uniform();
  double cum = 0.0;
  int last = 0;
  for (int i = 0; i < kNumActions; ++i) {
    if (dist.probs[i] <= 0.0) continue;
    last = i;
    cum += dist.probs[i];
    if (u < cum) return i;
  }
  return last;
}

int argmax_action(const MaskedDist& dist) {
  int best = 0;
  for (int i = 1; i < kNumActions; ++i)
    if (dist.probs[i] > dist.probs[best]) best = i;
  return best;
}

void compute_gae(const Trajectory& traj, double gamma, double lambda,
                 std::vector<double>& advantages, std::vector<double>& returns) {
  const std::size_t n = traj.steps.size();
  advantages.assign(n, 0.0);
  returns.assign(n, 0.0);
  double gae = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    double reward = (i + 1 == n) ? traj.terminal_reward : 0.0;
    double next_value = (i + 1 == n) ? 0.0 : traj.steps[i + 1].value;
    double delta = reward + gamma * next_value - traj.steps[i].value;
    gae = delta + gamma * lambda * gae;
    advantages[i] = gae;
    returns[i] = gae + traj.steps[i].value;
  }
}

namespace {

// Streams (re-encoded observation, scalars) through GEMM-sized chunks and
// steps the optimizer at minibatch boundaries.
struct PpoAccumulator {
  PolicyNet<float>& net;
  Adam<float>& adam;
  const TrainConfig& cfg;
  PolicyNet<float>::Workspace ws;
  std::vector<float> obs;  // kChunk x kObsValues
  struct Sample {
    ActionMask mask;
    uint8_t action;
    double behavior_logp;
    double advantage;
    double ret;
  };
  std::vector<Sample> pending;
  std::vector<float> grad;
  int minibatch_count = 0;
  PpoMetrics metrics;
  bool diverged = false;
  std::string diagnostics;

  PpoAccumulator(PolicyNet<float>& n, Adam<float>& a, const TrainConfig& c)
      : net(n), adam(a), cfg(c) {
    obs.resize(static_cast<std::size_t>(kChunk) * kObsValues);
    pending.reserve(kChunk);
    grad.assign(net.param_count(), 0.0f);
  }

  float* slot() { return obs.data() + pending.size() * kObsValues; }

  void push(const Sample& s) {
    pending.push_back(s);
    if (pending.size() == kChunk) flush();
  }

  void flush() {
    if (pending.empty() || diverged) return;
    const int b = static_cast<int>(pending.size());
    net.forward(obs.data(), b, ws);
    Eigen::MatrixXf dlogits = Eigen::MatrixXf::Zero(kNumActions, b);
    Eigen::MatrixXf dvalue = Eigen::MatrixXf::Zero(1, b);
    for (int i = 0; i < b; ++i) {
      const Sample& s = pending[i];
      std::array<double, kNumActions> z = logits_column(ws, i);
      MaskedDist dist = masked_distribution(z, s.mask);
      double lpn = dist.logp_unmasked[s.action];
      double ratio = std::exp(lpn - s.behavior_logp);
      double clipped = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip);
      double surr1 = ratio * s.advantage;
      double surr2 = clipped * s.advantage;
      bool unclipped_active = surr1 <= surr2;
      double policy_loss = -std::min(surr1, surr2);
      double v = ws.value(0, i);
      double value_loss = 0.5 * (v - s.ret) * (v - s.ret);
      if (!std::isfinite(policy_loss) || !std::isfinite(value_loss) ||
          !std::isfinite(dist.entropy)) {
        std::ostringstream msg;
        msg << "non-finite loss: policy=" << policy_loss << " value=" << value_loss
            << " entropy=" << dist.entropy << " ratio=" << ratio << " lpn=" << lpn
            << " lpo=" << s.behavior_logp << " adv=" << s.advantage;
        diverged = true;
        diagnostics = msg.str();
        return;
      }
      for (int j = 0; j < kNumActions; ++j) {
        double g = 0.0;
        if (unclipped_active) {
          double p = std::exp(dist.logp_unmasked[j]);
          g += -s.advantage * ratio * ((j == s.action ? 1.0 : 0.0) - p);
        }
        if (s.mask.allowed[j] && dist.probs[j] > 0.0)
          g += cfg.entropy_coef * dist.probs[j] * (std::log(dist.probs[j]) + dist.entropy);
        dlogits(j, i) = static_cast<float>(g);
      }
      dvalue(0, i) = static_cast<float>(cfg.value_coef * (v - s.ret));
      metrics.policy_loss += policy_loss;
      metrics.value_loss += value_loss;
      metrics.entropy += dist.entropy;
      metrics.approx_kl += s.behavior_logp - lpn;
      metrics.clip_fraction += std::abs(ratio - 1.0) > cfg.clip ? 1.0 : 0.0;
      metrics.mean_ratio += ratio;
      ++metrics.steps;
    }
    net.backward(obs.data(), b, ws, dlogits, dvalue, grad);
    minibatch_count += b;
    pending.clear();
  }

  void maybe_step(bool force) {
    if (diverged) return;
    if (minibatch_count == 0) return;
    if (!force && minibatch_count < cfg.minibatch) return;
    const float scale = 1.0f / static_cast<float>(minibatch_count);
    for (float& g : grad) g *= scale;
    adam.step(net.params(), grad, cfg.lr);
    std::fill(grad.begin(), grad.end(), 0.0f);
    minibatch_count = 0;
  }
};

}  // namespace

PpoMetrics ppo_update(PolicyNet<float>& net, Adam<float>& adam,
                      const std::vector<Trajectory>& batch, const TrainConfig& cfg,
                      const EngineConfig& engine_cfg, uint64_t shuffle_seed) {
  // Advantages under the behavior values, normalized across the whole batch.
  std::vector<std::vector<double>> advs(batch.size()), rets(batch.size());
  double mean = 0.0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    compute_gae(batch[i], cfg.gamma, cfg.lambda, advs[i], rets[i]);
    for (double a : advs[i]) mean += a;
    total += advs[i].size();
  }
  if (total == 0) return {};
  mean /= static_cast<double>(total);
  double var = 0.0;
  for (const auto& a : advs)
    for (double x : a) var += (x - mean) * (x - mean);
  double stddev = std::sqrt(var / static_cast<double>(total));
  if (cfg.adv_norm && stddev > 1e-8) {
    for (auto& a : advs)
      for (double& x : a) x = (x - mean) / stddev;
  }

  const std::vector<float> params_backup = net.params();
  PpoAccumulator acc(net, adam, cfg);
  Rng shuffle_rng(shuffle_seed);
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs_per_batch && !acc.diverged; ++epoch) {
    shuffle_rng.shuffle(order.data(), order.size());
    for (std::size_t oi : order) {
      const Trajectory& traj = batch[oi];
      replay_encodings(traj, engine_cfg, [&](std::size_t si, const EncodedObservation& enc) {
        if (acc.diverged) return;
        std::copy(enc.v.begin(), enc.v.end(), acc.slot());
        const TrajStep& st = traj.steps[si];
        acc.push({st.mask, st.action, static_cast<double>(st.behavior_logp), advs[oi][si],
                  rets[oi][si]});
        acc.maybe_step(false);
      });
      if (acc.diverged) break;
    }
    acc.flush();
    acc.maybe_step(false);
  }
  acc.flush();
  acc.maybe_step(true);

  if (acc.diverged) {
    net.params() = params_backup;
    throw TrainingDiverged(acc.diagnostics);
  }
  PpoMetrics m = acc.metrics;
  if (m.steps > 0) {
    double n = static_cast<double>(m.steps);
    m.policy_loss /= n;
    m.value_loss /= n;
    m.entropy /= n;
    m.approx_kl /= n;
    m.clip_fraction /= n;
    m.mean_ratio /= n;
  }
  return m;
}

ImitationMetrics imitate(PolicyNet<float>& net, const DatasetReader& dataset,
                         const ImitationConfig& cfg, uint64_t seed) {
  const uint64_t n = dataset.count();
  if (n == 0) throw std::runtime_error("imitate: empty dataset");
  std::vector<uint64_t> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  Rng rng(derive_seed(seed, 0x1717));
  rng.shuffle(indices.data(), indices.size());
  const uint64_t val_count = std::min<uint64_t>(
      n - 1, static_cast<uint64_t>(std::llround(static_cast<double>(n) * cfg.val_split)));
  const uint64_t train_count = n - val_count;

  PolicyNet<float>::Workspace ws;
  Adam<float> adam(net.param_count());
  std::vector<float> grad(net.param_count(), 0.0f);
  std::vector<float> obs(static_cast<std::size_t>(kChunk) * kObsValues);
  std::vector<DatasetRecord> recs(kChunk);

  // Returns summed cross-entropy; fills grads when training.
  auto process_chunk = [&](int b, bool train, double& loss_sum) {
    net.forward(obs.data(), b, ws);
    Eigen::MatrixXf dlogits = Eigen::MatrixXf::Zero(kNumActions, b);
    Eigen::MatrixXf dvalue = Eigen::MatrixXf::Zero(1, b);
    for (int i = 0; i < b; ++i) {
      const DatasetRecord& r = recs[i];
      ActionMask mask = ActionMask::from_bits(r.mask_bits);
      if (!mask.allowed[r.action]) mask = ActionMask::all_allowed();
      std::array<double, kNumActions> z = logits_column(ws, i);
      MaskedDist dist = masked_distribution(z, mask);
      double p = std::max(dist.probs[r.action], 1e-12);
      loss_sum += -std::log(p);
      if (train) {
        for (int j = 0; j < kNumActions; ++j)
          dlogits(j, i) =
              static_cast<float>(dist.probs[j] - (j == r.action ? 1.0 : 0.0));
      }
    }
    if (train) net.backward(obs.data(), b, ws, dlogits, dvalue, grad);
  };

  ImitationMetrics metrics;
  std::vector<uint64_t> train_idx(indices.begin(), indices.begin() + train_count);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(train_idx.data(), train_idx.size());
    double train_loss = 0.0;
    int accumulated = 0;
    std::size_t cursor = 0;
    while (cursor < train_idx.size()) {
      int b = static_cast<int>(std::min<std::size_t>(kChunk, train_idx.size() - cursor));
      for (int i = 0; i < b; ++i) {
        recs[i] = dataset.read(train_idx[cursor + i]);
        std::copy(recs[i].obs.v.begin(), recs[i].obs.v.end(),
                  obs.data() + static_cast<std::size_t>(i) * kObsValues);
      }
      process_chunk(b, true, train_loss);
      accumulated += b;
      cursor += b;
      bool last = cursor >= train_idx.size();
      if (accumulated >= cfg.batch_size || last) {
        float scale = 1.0f / static_cast<float>(accumulated);
        for (float& g : grad) g *= scale;
        adam.step(net.params(), grad, cfg.lr);
        std::fill(grad.begin(), grad.end(), 0.0f);
        accumulated = 0;
      }
    }
    metrics.train_loss.push_back(train_loss / static_cast<double>(train_count));

    double val_loss = 0.0;
    std::size_t vcursor = 0;
    while (vcursor < val_count) {
      int b = static_cast<int>(std::min<uint64_t>(kChunk, val_count - vcursor));
      for (int i = 0; i < b; ++i) {
        recs[i] = dataset.read(indices[train_count + vcursor + i]);
        std::copy(recs[i].obs.v.begin(), recs[i].obs.v.end(),
                  obs.data() + static_cast<std::size_t>(i) * kObsValues);
      }
      process_chunk(b, false, val_loss);
      vcursor += b;
    }
    metrics.val_loss.push_back(val_count ? val_loss / static_cast<double>(val_count) : 0.0);
  }
  return metrics;
}

}  // namespace teamradio

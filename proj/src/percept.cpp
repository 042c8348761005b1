// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/percept.hpp"

#include <algorithm>

namespace teamradio {

namespace {

uint8_t cell_feature_bits(const ObsCell& cell) {
  uint8_t bits = 0;
  switch (cell.kind) {
    case TileKind::Passage: bits |= BeliefState::kBitPassage; break;
    case TileKind::Rigid: bits |= BeliefState::kBitRigid; break;
    case TileKind::Wood: bits |= BeliefState::kBitWood; break;
  }
  if (cell.has_bomb) bits |= BeliefState::kBitBomb;
  if (cell.has_flame) bits |= BeliefState::kBitFlame;
  switch (cell.powerup) {
    case Powerup::ExtraBomb: bits |= BeliefState::kBitExtraBomb; break;
    case Powerup::IncrRange: bits |= BeliefState::kBitIncrRange; break;
    case Powerup::Kick: bits |= BeliefState::kBitKick; break;
    default: break;
  }
  return bits;
}

void fill_uniform(float* plane, Quadrant q) {
  float mass = 1.0f / static_cast<float>(region_cell_count(q));
  for (int i = 0; i < kNumCells; ++i)
    if (pos_in_region(pos_of(i), q)) plane[i] = mass;
}

void fill_uniform(float* plane, BoardHalf h) {
  float mass = 1.0f / static_cast<float>(region_cell_count(h));
  for (int i = 0; i < kNumCells; ++i)
    if (pos_in_region(pos_of(i), h)) plane[i] = mass;
}

}  // namespace

void BeliefState::update(const RawObservation& obs, int tick) {
  for (int i = 0; i < kNumCells; ++i) {
    const ObsCell& cell = obs.cells[i];
    if (cell.fog) continue;
    cells_[i].bits = cell_feature_bits(cell);
    cells_[i].seen_tick = static_cast<uint16_t>(tick);
    cells_[i].seen = true;
  }
}

EncodedObservation encode(const RawObservation& obs, const BeliefState& belief,
                          std::optional<Message> msg, const EngineConfig& cfg,
                          const EncodeOptions& opts) {
  EncodedObservation enc;
  const float inv_bomb_life = 1.0f / static_cast<float>(cfg.bomb_life);
  const float inv_board = 1.0f / static_cast<float>(kBoardSize);
  const float inv_ticks = 1.0f / static_cast<float>(cfg.max_ticks);

  for (int i = 0; i < kNumCells; ++i) {
    const ObsCell& cell = obs.cells[i];
    if (cell.fog) {
      enc.channel(kChFog)[i] = 1.0f;
    } else {
      int kind_ch = cell.kind == TileKind::Passage ? kChPassage
                    : cell.kind == TileKind::Rigid ? kChRigid
                                                   : kChWood;
      enc.channel(kind_ch)[i] = 1.0f;
      if (cell.has_bomb) {
        enc.channel(kChBomb)[i] = 1.0f;
        enc.channel(kChBombLife)[i] = static_cast<float>(cell.bomb_life) * inv_bomb_life;
        enc.channel(kChBombStrength)[i] =
            static_cast<float>(cell.bomb_blast_strength) * inv_board;
      }
      if (cell.has_flame) enc.channel(kChFlame)[i] = 1.0f;
      if (cell.powerup == Powerup::ExtraBomb) enc.channel(kChPowExtraBomb)[i] = 1.0f;
      if (cell.powerup == Powerup::IncrRange) enc.channel(kChPowIncrRange)[i] = 1.0f;
      if (cell.powerup == Powerup::Kick) enc.channel(kChPowKick)[i] = 1.0f;
    }
    enc.channel(kChBias)[i] = 1.0f;
  }

  // Position planes. Sight wins; the radio fills in coarse regions; otherwise
  // the plane stays zero. Dead agents stay zero.
  std::array<bool, kNumAgents> placed{};
  for (int i = 0; i < kNumCells; ++i) {
    const ObsCell& cell = obs.cells[i];
    if (!cell.fog && cell.agent_id >= 0) {
      enc.channel(kChAgentPos0 + cell.agent_id)[i] = 1.0f;
      placed[cell.agent_id] = true;
    }
  }
  if (obs.self_alive && !placed[obs.agent_id]) {
    // Own cell can only be unplaced in a synthetic observation; keep it exact.
    enc.channel(kChAgentPos0 + obs.agent_id)[cell_index(obs.pos)] = 1.0f;
    placed[obs.agent_id] = true;
  }
  std::optional<CoarseInfo> info;
  if (!opts.no_comm && msg.has_value() && msg->present()) info = decode_message(*msg);
  if (info) {
    int teammate = teammate_of(obs.agent_id);
    int enemy_team = 1 - team_of(obs.agent_id);
    int enemy_a = enemy_team == 0 ? 0 : 1;
    int enemy_b = enemy_a + 2;
    if (!placed[teammate] && obs.alive[teammate])
      fill_uniform(enc.channel(kChAgentPos0 + teammate), info->self_half);
    if (!placed[enemy_a] && obs.alive[enemy_a] && info->enemy_a != Quadrant::Unknown)
      fill_uniform(enc.channel(kChAgentPos0 + enemy_a), info->enemy_a);
    if (!placed[enemy_b] && obs.alive[enemy_b] && info->enemy_b != Quadrant::Unknown)
      fill_uniform(enc.channel(kChAgentPos0 + enemy_b), info->enemy_b);
  }

  // Constant planes.
  for (int k = 0; k < 3; ++k) {
    int other = (obs.agent_id + 1 + k) % kNumAgents;
    if (obs.alive[other])
      std::fill_n(enc.channel(kChAliveFirst + k), kNumCells, 1.0f);
  }
  std::fill_n(enc.channel(kChOwnAmmo), kNumCells, static_cast<float>(obs.ammo) / 10.0f);
  std::fill_n(enc.channel(kChOwnBlast), kNumCells,
              static_cast<float>(obs.blast_strength) * inv_board);
  if (obs.can_kick) std::fill_n(enc.channel(kChOwnKick), kNumCells, 1.0f);
  std::fill_n(enc.channel(kChTick), kNumCells, static_cast<float>(obs.tick) * inv_ticks);

  // Belief block: mirror of channels 0-8 with fog filled from memory.
  if (!opts.no_belief) {
    for (int i = 0; i < kNumCells; ++i) {
      if (!belief.known(i, obs.tick)) continue;  // unknown cells stay zero
      uint8_t bits = belief.bits(i);
      float* base = enc.v.data();
      auto set = [&](int ch) { base[ch * kNumCells + i] = 1.0f; };
      if (bits & BeliefState::kBitPassage) set(kChBeliefFirst + 0);
      if (bits & BeliefState::kBitRigid) set(kChBeliefFirst + 1);
      if (bits & BeliefState::kBitWood) set(kChBeliefFirst + 2);
      if (bits & BeliefState::kBitBomb) set(kChBeliefFirst + 3);
      if (bits & BeliefState::kBitFlame) set(kChBeliefFirst + 4);
      if (bits & BeliefState::kBitExtraBomb) set(kChBeliefFirst + 6);
      if (bits & BeliefState::kBitIncrRange) set(kChBeliefFirst + 7);
      if (bits & BeliefState::kBitKick) set(kChBeliefFirst + 8);
      enc.channel(kChBeliefValid)[i] = 1.0f;
    }
  }
  return enc;
}

}  // namespace teamradio

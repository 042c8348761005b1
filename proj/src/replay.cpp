// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/replay.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace teamradio {

namespace {

constexpr char kMagic[] = "teamradio-replay";
constexpr int kVersion = 1;

int radio_agent(int team, int slot) { return team == 0 ? (slot == 0 ? 0 : 2) : (slot == 0 ? 1 : 3); }

}  // namespace

void Replay::record(const std::array<Action, kNumAgents>& actions,
                    const std::array<Message, kNumAgents>& messages, const GameState& after) {
  ReplayTick t;
  t.actions = actions;
  t.messages[0] = messages[radio_agent(radio_team, 0)];
  t.messages[1] = messages[radio_agent(radio_team, 1)];
  t.hash_after = state_hash(after);
  ticks.push_back(t);
}

void Replay::finish(const GameState& terminal) {
  final_result = terminal.result;
  final_hash = state_hash(terminal);
}

std::string Replay::serialize() const {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << ' ' << seed << ' ' << radio_team << ' '
      << engine.rigid_count << ' ' << engine.wood_count << ' ' << engine.powerup_count << ' '
      << engine.flame_life << ' ' << engine.bomb_life << ' ' << engine.max_ticks << ' '
      << engine.view_radius << ' ' << engine.initial_ammo << ' ' << engine.initial_blast
      << '\n';
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    const ReplayTick& t = ticks[i];
    out << 't' << ' ' << (i + 1);
    for (Action a : t.actions) out << ' ' << static_cast<int>(a);
    for (const Message& m : t.messages)
      out << ' ' << static_cast<int>(m.word1) << ' ' << static_cast<int>(m.word2);
    out << ' ' << std::hex << t.hash_after << std::dec << '\n';
  }
  out << "end " << static_cast<int>(final_result) << ' ' << std::hex << final_hash
      << std::dec << '\n';
  return out.str();
}

Replay Replay::parse(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  Replay r;
  in >> magic >> version;
  if (magic != kMagic || version != kVersion)
    throw std::runtime_error("replay: bad header");
  in >> r.seed >> r.radio_team >> r.engine.rigid_count >> r.engine.wood_count >>
      r.engine.powerup_count >> r.engine.flame_life >> r.engine.bomb_life >>
      r.engine.max_ticks >> r.engine.view_radius >> r.engine.initial_ammo >>
      r.engine.initial_blast;
  if (!in) throw std::runtime_error("replay: truncated header");
  std::string tag;
  bool ended = false;
  while (in >> tag) {
    if (tag == "t") {
      ReplayTick t;
      std::size_t tick_no = 0;
      in >> tick_no;
      for (int i = 0; i < kNumAgents; ++i) {
        int a;
        in >> a;
        if (a < 0 || a >= kNumActions) throw std::runtime_error("replay: bad action");
        t.actions[i] = static_cast<Action>(a);
      }
      for (int i = 0; i < 2; ++i) {
        int w1, w2;
        in >> w1 >> w2;
        t.messages[i] = Message{static_cast<uint8_t>(w1), static_cast<uint8_t>(w2)};
      }
      in >> std::hex >> t.hash_after >> std::dec;
      if (!in) throw std::runtime_error("replay: truncated tick record");
      if (tick_no != r.ticks.size() + 1) throw std::runtime_error("replay: tick out of order");
      r.ticks.push_back(t);
    } else if (tag == "end") {
      int result;
      in >> result >> std::hex >> r.final_hash >> std::dec;
      if (!in) throw std::runtime_error("replay: truncated end record");
      r.final_result = static_cast<GameResult>(result);
      ended = true;
      break;
    } else {
      throw std::runtime_error("replay: unknown record '" + tag + "'");
    }
  }
  if (!ended) throw std::runtime_error("replay: missing end record");
  return r;
}

void Replay::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("replay: cannot write " + path);
  out << serialize();
}

Replay Replay::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("replay: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (buf.str().empty()) throw std::runtime_error("replay: empty file " + path);
  return parse(buf.str());
}

ReplayVerification verify_replay(
    const Replay& replay,
    const std::function<void(const GameState&, const ReplayTick&)>& on_state) {
  ReplayVerification v;
  GameState st = generate_board(replay.seed, replay.engine);
  std::array<Message, kNumAgents> msgs{};
  for (std::size_t i = 0; i < replay.ticks.size(); ++i) {
    const ReplayTick& t = replay.ticks[i];
    if (st.result != GameResult::Ongoing) {
      v.first_divergent_tick = static_cast<int>(i + 1);
      v.detail = "game ended before logged tick";
      return v;
    }
    msgs.fill(kNoMessage);
    msgs[radio_agent(replay.radio_team, 0)] = t.messages[0];
    msgs[radio_agent(replay.radio_team, 1)] = t.messages[1];
    step(st, t.actions, msgs, replay.engine);
    if (state_hash(st) != t.hash_after) {
      v.first_divergent_tick = static_cast<int>(i + 1);
      v.detail = "state hash mismatch";
      return v;
    }
    if (on_state) on_state(st, t);
  }
  v.result = st.result;
  v.final_tick = st.tick;
  if (st.result != replay.final_result || state_hash(st) != replay.final_hash) {
    v.first_divergent_tick = static_cast<int>(replay.ticks.size());
    v.detail = "terminal record mismatch";
    return v;
  }
  v.ok = true;
  return v;
}

}  // namespace teamradio

// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/net.hpp"

#include <cstring>
#include <fstream>

namespace teamradio {

const ConvGather& ConvGather::instance() {
  static const ConvGather table = [] {
    ConvGather t;
    for (int r = 0; r < kBoardSize; ++r) {
      for (int c = 0; c < kBoardSize; ++c) {
        for (int kr = 0; kr < 3; ++kr) {
          for (int kc = 0; kc < 3; ++kc) {
            int sr = r + kr - 1;
            int sc = c + kc - 1;
            t.src[cell_index(r, c)][kr * 3 + kc] =
                in_bounds(sr, sc) ? cell_index(sr, sc) : -1;
          }
        }
      }
    }
    return t;
  }();
  return table;
}

namespace {

constexpr char kMagic[4] = {'T', 'R', 'C', 'P'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const PolicyNet<float>& net,
                     const std::string& meta_json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, static_cast<uint8_t>(sizeof(float)));
  const NetArch& a = net.arch();
  write_pod(out, static_cast<int32_t>(a.in_channels));
  for (int f : a.filters) write_pod(out, static_cast<int32_t>(f));
  write_pod(out, static_cast<int32_t>(a.hidden));
  write_pod(out, static_cast<uint64_t>(net.param_count()));
  out.write(reinterpret_cast<const char*>(net.params().data()),
            static_cast<std::streamsize>(net.param_count() * sizeof(float)));
  write_pod(out, static_cast<uint32_t>(meta_json.size()));
  out.write(meta_json.data(), static_cast<std::streamsize>(meta_json.size()));
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

PolicyNet<float> load_checkpoint(const std::string& path, std::string* meta_json) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  uint32_t version = read_pod<uint32_t>(in);
  if (version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version in " + path);
  uint8_t dtype = read_pod<uint8_t>(in);
  if (dtype != sizeof(float))
    throw std::runtime_error("checkpoint: unsupported dtype in " + path);
  NetArch arch;
  arch.in_channels = read_pod<int32_t>(in);
  for (int i = 0; i < 3; ++i) arch.filters[i] = read_pod<int32_t>(in);
  arch.hidden = read_pod<int32_t>(in);
  uint64_t count = read_pod<uint64_t>(in);
  PolicyNet<float> net(arch);
  if (count != net.param_count())
    throw std::runtime_error("checkpoint: parameter count mismatch in " + path);
  in.read(reinterpret_cast<char*>(net.params().data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  uint32_t meta_len = read_pod<uint32_t>(in);
  if (!in) throw std::runtime_error("checkpoint: truncated " + path);
  std::string meta(meta_len, '\0');
  in.read(meta.data(), meta_len);
  if (!in) throw std::runtime_error("checkpoint: truncated metadata in " + path);
  if (meta_json) *meta_json = meta;
  return net;
}

}  // namespace teamradio

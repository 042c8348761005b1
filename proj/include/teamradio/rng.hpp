// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_RNG_HPP_
#define TEAMRADIO_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace teamradio {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable stream derivation: every game/worker/phase gets its own seed, so
// results do not depend on worker count or evaluation order.
inline uint64_t derive_seed(uint64_t root, uint64_t stream) {
  uint64_t s = root ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

// mt19937_64 with hand-rolled bounded/uniform/normal draws. The standard
// distributions are implementation-defined; these are pinned by our code so
// replays and checkpoints reproduce across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0x5eed) : gen_(seed) {}

  uint64_t u64() { return gen_(); }

  // Unbiased draw in [0, n). n must be > 0.
  uint32_t below(uint32_t n) {
    const uint64_t span = n;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<uint32_t>(x % span);
  }

  int range(int lo, int hi_inclusive) {
    return lo + static_cast<int>(below(static_cast<uint32_t>(hi_inclusive - lo + 1)));
  }

  bool chance(double p) { return uniform() < p; }

  // [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  template <typename T>
  void shuffle(T* data, std::size_t n) {
    for (std::size_t i = n; i > 1; --i) {
      std::size_t j = below(static_cast<uint32_t>(i));
      std::swap(data[i - 1], data[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace teamradio

#endif  // TEAMRADIO_RNG_HPP_

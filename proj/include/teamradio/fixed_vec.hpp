// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_FIXED_VEC_HPP_
#define TEAMRADIO_FIXED_VEC_HPP_

#include <cassert>
#include <cstddef>
#include <cstdint>

namespace teamradio {

// Inline fixed-capacity vector. Keeps GameState trivially copyable so that
// lookahead simulations are plain memcpy.
template <typename T, std::size_t N>
class FixedVec {
 public:
  using value_type = T;

  constexpr FixedVec() = default;

  constexpr std::size_t size() const { return size_; }
  constexpr bool empty() const { return size_ == 0; }
  static constexpr std::size_t capacity() { return N; }

  T& operator[](std::size_t i) {
    assert(i < size_);
    return data_[i];
  }
  const T& operator[](std::size_t i) const {
    assert(i < size_);
    return data_[i];
  }

  void push_back(const T& v) {
    assert(size_ < N);
    data_[size_++] = v;
  }

  void clear() { size_ = 0; }

  // Order-preserving erase; explosion bookkeeping depends on stable order.
  void erase_at(std::size_t i) {
    assert(i < size_);
    for (std::size_t j = i; j + 1 < size_; ++j) data_[j] = data_[j + 1];
    --size_;
  }

  T* begin() { return data_; }
  T* end() { return data_ + size_; }
  const T* begin() const { return data_; }
  const T* end() const { return data_ + size_; }

  friend bool operator==(const FixedVec& a, const FixedVec& b) {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i)
      if (!(a.data_[i] == b.data_[i])) return false;
    return true;
  }

 private:
  T data_[N] = {};
  std::size_t size_ = 0;
};

}  // namespace teamradio

#endif  // TEAMRADIO_FIXED_VEC_HPP_

// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_NET_HPP_
#define TEAMRADIO_NET_HPP_

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "teamradio/config.hpp"
#include "teamradio/rng.hpp"
#include "teamradio/types.hpp"

namespace teamradio {

// 3x3 same-padding gather table shared by every conv layer: for output cell j
// and kernel slot k, the source cell index or -1 for padding.
struct ConvGather {
  std::array<std::array<int, 9>, kNumCells> src;
  static const ConvGather& instance();
};

// Policy/value trunk: three 3x3 conv layers with ReLU over the channel-major
// 11x11 input, flattened into one hidden dense layer per head; 6 policy
// logits and a scalar value. Parameters live in one flat vector; the scalar
// type is a template so training runs in float while gradient checks run the
// identical code in double.
template <typename T>
class PolicyNet {
 public:
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Map = Eigen::Map<Matrix>;
  using ConstMap = Eigen::Map<const Matrix>;

  struct Workspace {
    int batch = 0;
    Matrix col1, a1, col2, a2, col3, a3;
    Matrix hp, logits, hv, value;
    // backward scratch
    Matrix dcol3, dcol2, da2, da1, dhp, dhv, dflat;
  };

  explicit PolicyNet(const NetArch& arch) : arch_(arch) {
    compute_layout();
    params_.assign(total_params_, T(0));
  }

  const NetArch& arch() const { return arch_; }
  std::size_t param_count() const { return total_params_; }
  std::vector<T>& params() { return params_; }
  const std::vector<T>& params() const { return params_; }

  void init(Rng& rng) {
    auto he = [&](T* w, int rows, int cols, double scale) {
      double std_dev = scale * std::sqrt(2.0 / static_cast<double>(cols));
      for (int i = 0; i < rows * cols; ++i) w[i] = static_cast<T>(rng.normal() * std_dev);
    };
    T* p = params_.data();
    he(p + off_.w1, arch_.filters[0], fan_[0], 1.0);
    he(p + off_.w2, arch_.filters[1], fan_[1], 1.0);
    he(p + off_.w3, arch_.filters[2], fan_[2], 1.0);
    he(p + off_.wph, arch_.hidden, flat_dim_, 1.0);
    he(p + off_.wvh, arch_.hidden, flat_dim_, 1.0);
    // Small policy head keeps the initial distribution near uniform.
    he(p + off_.wpo, kNumActions, arch_.hidden, 0.01);
    he(p + off_.wvo, 1, arch_.hidden, 1.0);
    // biases start at zero (assign() above)
  }

  // obs: batch-major float32, `batch` samples of in_channels*121 values each.
  // Returns logits (6 x batch) and value (1 x batch) inside ws.
  void forward(const float* obs, int batch, Workspace& ws) const {
    ensure_ws(ws, batch);
    const int cols = kNumCells * batch;
    im2col_input(obs, batch, ws.col1);
    ws.a1.noalias() = cw(off_.w1, arch_.filters[0], fan_[0]) * ws.col1;
    add_bias_relu(ws.a1, off_.b1);
    im2col(ws.a1, arch_.filters[0], batch, ws.col2);
    ws.a2.noalias() = cw(off_.w2, arch_.filters[1], fan_[1]) * ws.col2;
    add_bias_relu(ws.a2, off_.b2);
    im2col(ws.a2, arch_.filters[1], batch, ws.col3);
    ws.a3.noalias() = cw(off_.w3, arch_.filters[2], fan_[2]) * ws.col3;
    add_bias_relu(ws.a3, off_.b3);

    ConstMap flat(ws.a3.data(), flat_dim_, batch);
    ws.hp.noalias() = cw(off_.wph, arch_.hidden, flat_dim_) * flat;
    add_bias_relu(ws.hp, off_.bph);
    ws.logits.noalias() = cw(off_.wpo, kNumActions, arch_.hidden) * ws.hp;
    ws.logits.colwise() += cb(off_.bpo, kNumActions);
    ws.hv.noalias() = cw(off_.wvh, arch_.hidden, flat_dim_) * flat;
    add_bias_relu(ws.hv, off_.bvh);
    ws.value.noalias() = cw(off_.wvo, 1, arch_.hidden) * ws.hv;
    ws.value.colwise() += cb(off_.bvo, 1);
    (void)cols;
  }

  // Accumulates parameter gradients for the batch into `grad` (same layout as
  // params). Must follow a forward() on the same ws/obs.
  void backward(const float* obs, int batch, Workspace& ws, const Matrix& dlogits,
                const Matrix& dvalue, std::vector<T>& grad) const {
    T* g = grad.data();
    ConstMap flat(ws.a3.data(), flat_dim_, batch);

    // policy head
    gw(g, off_.wpo, kNumActions, arch_.hidden).noalias() += dlogits * ws.hp.transpose();
    gb(g, off_.bpo, kNumActions) += dlogits.rowwise().sum();
    ws.dhp.noalias() = cw(off_.wpo, kNumActions, arch_.hidden).transpose() * dlogits;
    relu_backward(ws.dhp, ws.hp);
    gw(g, off_.wph, arch_.hidden, flat_dim_).noalias() += ws.dhp * flat.transpose();
    gb(g, off_.bph, arch_.hidden) += ws.dhp.rowwise().sum();
    ws.dflat.noalias() = cw(off_.wph, arch_.hidden, flat_dim_).transpose() * ws.dhp;

    // value head
    gw(g, off_.wvo, 1, arch_.hidden).noalias() += dvalue * ws.hv.transpose();
    gb(g, off_.bvo, 1) += dvalue.rowwise().sum();
    ws.dhv.noalias() = cw(off_.wvo, 1, arch_.hidden).transpose() * dvalue;
    relu_backward(ws.dhv, ws.hv);
    gw(g, off_.wvh, arch_.hidden, flat_dim_).noalias() += ws.dhv * flat.transpose();
    gb(g, off_.bvh, arch_.hidden) += ws.dhv.rowwise().sum();
    ws.dflat.noalias() += cw(off_.wvh, arch_.hidden, flat_dim_).transpose() * ws.dhv;

    // conv3
    Map da3(ws.dflat.data(), arch_.filters[2], kNumCells * batch);
    relu_backward(da3, ws.a3);
    gw(g, off_.w3, arch_.filters[2], fan_[2]).noalias() += da3 * ws.col3.transpose();
    gb(g, off_.b3, arch_.filters[2]) += da3.rowwise().sum();
    ws.dcol3.noalias() = cw(off_.w3, arch_.filters[2], fan_[2]).transpose() * da3;
    col2im(ws.dcol3, arch_.filters[1], batch, ws.da2);
    relu_backward(ws.da2, ws.a2);

    // conv2
    gw(g, off_.w2, arch_.filters[1], fan_[1]).noalias() += ws.da2 * ws.col2.transpose();
    gb(g, off_.b2, arch_.filters[1]) += ws.da2.rowwise().sum();
    ws.dcol2.noalias() = cw(off_.w2, arch_.filters[1], fan_[1]).transpose() * ws.da2;
    col2im(ws.dcol2, arch_.filters[0], batch, ws.da1);
    relu_backward(ws.da1, ws.a1);

    // conv1 (no input gradient needed)
    gw(g, off_.w1, arch_.filters[0], fan_[0]).noalias() += ws.da1 * ws.col1.transpose();
    gb(g, off_.b1, arch_.filters[0]) += ws.da1.rowwise().sum();
    (void)obs;
  }

 private:
  struct Offsets {
    std::size_t w1, b1, w2, b2, w3, b3, wph, bph, wpo, bpo, wvh, bvh, wvo, bvo;
  };

  void compute_layout() {
    fan_[0] = arch_.in_channels * 9;
    fan_[1] = arch_.filters[0] * 9;
    fan_[2] = arch_.filters[1] * 9;
    flat_dim_ = arch_.filters[2] * kNumCells;
    std::size_t o = 0;
    auto take = [&o](std::size_t n) {
      std::size_t at = o;
      o += n;
      return at;
    };
    off_.w1 = take(static_cast<std::size_t>(arch_.filters[0]) * fan_[0]);
    off_.b1 = take(arch_.filters[0]);
    off_.w2 = take(static_cast<std::size_t>(arch_.filters[1]) * fan_[1]);
    off_.b2 = take(arch_.filters[1]);
    off_.w3 = take(static_cast<std::size_t>(arch_.filters[2]) * fan_[2]);
    off_.b3 = take(arch_.filters[2]);
    off_.wph = take(static_cast<std::size_t>(arch_.hidden) * flat_dim_);
    off_.bph = take(arch_.hidden);
    off_.wpo = take(static_cast<std::size_t>(kNumActions) * arch_.hidden);
    off_.bpo = take(kNumActions);
    off_.wvh = take(static_cast<std::size_t>(arch_.hidden) * flat_dim_);
    off_.bvh = take(arch_.hidden);
    off_.wvo = take(arch_.hidden);
    off_.bvo = take(1);
    total_params_ = o;
  }

  ConstMap cw(std::size_t off, int rows, int cols) const {
    return ConstMap(params_.data() + off, rows, cols);
  }
  Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> cb(std::size_t off, int rows) const {
    return {params_.data() + off, rows};
  }
  static Map gw(T* g, std::size_t off, int rows, int cols) { return Map(g + off, rows, cols); }
  static Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> gb(T* g, std::size_t off, int rows) {
    return {g + off, rows};
  }

  void add_bias_relu(Matrix& m, std::size_t bias_off) const {
    m.colwise() += cb(bias_off, static_cast<int>(m.rows()));
    m = m.cwiseMax(T(0));
  }

  template <typename D>
  static void relu_backward(D&& d, const Matrix& activated) {
    d = (activated.array() > T(0)).template cast<T>() * d.array();
  }

  void im2col_input(const float* obs, int batch, Matrix& col) const {
    const auto& gather = ConvGather::instance().src;
    const int c_in = arch_.in_channels;
    for (int b = 0; b < batch; ++b) {
      const float* x = obs + static_cast<std::size_t>(b) * c_in * kNumCells;
      for (int j = 0; j < kNumCells; ++j) {
        T* out = col.data() + static_cast<std::size_t>(b * kNumCells + j) * col.rows();
        for (int c = 0; c < c_in; ++c) {
          const float* xc = x + c * kNumCells;
          T* oc = out + c * 9;
          for (int k = 0; k < 9; ++k) {
            int s = gather[j][k];
            oc[k] = s < 0 ? T(0) : static_cast<T>(xc[s]);
          }
        }
      }
    }
  }

  // a: (channels x 121*batch) activations laid out per sample.
  void im2col(const Matrix& a, int channels, int batch, Matrix& col) const {
    const auto& gather = ConvGather::instance().src;
    for (int b = 0; b < batch; ++b) {
      const T* x = a.data() + static_cast<std::size_t>(b) * kNumCells * channels;
      for (int j = 0; j < kNumCells; ++j) {
        T* out = col.data() + static_cast<std::size_t>(b * kNumCells + j) * col.rows();
        for (int c = 0; c < channels; ++c) {
          T* oc = out + c * 9;
          for (int k = 0; k < 9; ++k) {
            int s = gather[j][k];
            // column s of this sample, row c
            oc[k] = s < 0 ? T(0) : x[static_cast<std::size_t>(s) * channels + c];
          }
        }
      }
    }
  }

  void col2im(const Matrix& dcol, int channels, int batch, Matrix& da) const {
    const auto& gather = ConvGather::instance().src;
    da.setZero(channels, kNumCells * batch);
    for (int b = 0; b < batch; ++b) {
      T* x = da.data() + static_cast<std::size_t>(b) * kNumCells * channels;
      for (int j = 0; j < kNumCells; ++j) {
        const T* in = dcol.data() + static_cast<std::size_t>(b * kNumCells + j) * dcol.rows();
        for (int c = 0; c < channels; ++c) {
          const T* ic = in + c * 9;
          for (int k = 0; k < 9; ++k) {
            int s = gather[j][k];
            if (s >= 0) x[static_cast<std::size_t>(s) * channels + c] += ic[k];
          }
        }
      }
    }
  }

  void ensure_ws(Workspace& ws, int batch) const {
    if (ws.batch == batch) return;
    const int cols = kNumCells * batch;
    ws.col1.resize(fan_[0], cols);
    ws.a1.resize(arch_.filters[0], cols);
    ws.col2.resize(fan_[1], cols);
    ws.a2.resize(arch_.filters[1], cols);
    ws.col3.resize(fan_[2], cols);
    ws.a3.resize(arch_.filters[2], cols);
    ws.hp.resize(arch_.hidden, batch);
    ws.logits.resize(kNumActions, batch);
    ws.hv.resize(arch_.hidden, batch);
    ws.value.resize(1, batch);
    ws.dhp.resize(arch_.hidden, batch);
    ws.dhv.resize(arch_.hidden, batch);
    ws.dflat.resize(flat_dim_, batch);
    ws.dcol3.resize(fan_[2], cols);
    ws.dcol2.resize(fan_[1], cols);
    ws.da2.resize(arch_.filters[1], cols);
    ws.da1.resize(arch_.filters[0], cols);
    ws.batch = batch;
  }

  NetArch arch_;
  std::array<int, 3> fan_{};
  int flat_dim_ = 0;
  Offsets off_{};
  std::size_t total_params_ = 0;
  std::vector<T> params_;
};

template <typename T>
class Adam {
 public:
  explicit Adam(std::size_t n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : m_(n, T(0)), v_(n, T(0)), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(std::vector<T>& params, const std::vector<T>& grad, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = static_cast<T>(beta1_ * m_[i] + (1.0 - beta1_) * grad[i]);
      v_[i] = static_cast<T>(beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i]);
      double mh = m_[i] / bc1;
      double vh = v_[i] / bc2;
      params[i] -= static_cast<T>(lr * mh / (std::sqrt(vh) + eps_));
    }
  }

 private:
  std::vector<T> m_, v_;
  double beta1_, beta2_, eps_;
  int64_t t_ = 0;
};

// Versioned little-endian checkpoint: arch + raw float32 parameters + a JSON
// provenance trailer. Throws std::runtime_error on mismatch.
void save_checkpoint(const std::string& path, const PolicyNet<float>& net,
                     const std::string& meta_json);
PolicyNet<float> load_checkpoint(const std::string& path, std::string* meta_json = nullptr);

}  // namespace teamradio

#endif  // TEAMRADIO_NET_HPP_

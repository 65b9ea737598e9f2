#pragma once

#include <span>
#include <vector>

#include "dtcoin/common.hpp"

namespace dtcoin::orra {

// Fully connected network with ReLU hidden layers and a linear output layer.
// Parameters live in one flat vector: per layer W (in x out, row-major), then b.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<int> sizes, Rng& rng);  // He-normal weights, zero biases

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t num_params() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  struct Cache {
    std::vector<std::vector<double>> act;  // act[0] = input, act[l] = post-activation of layer l
  };

  std::vector<double> forward(std::span<const double> input) const;
  std::vector<double> forward(std::span<const double> input, Cache& cache) const;
  // Accumulates dL/dparams into grad given dL/doutput for the cached pass.
  void backward(const Cache& cache, std::span<const double> d_output, std::vector<double>& grad) const;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;  // start of each layer's W
  std::vector<double> params_;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n, AdamConfig cfg) : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::vector<double>& params, const std::vector<double>& grad);

  const AdamConfig& config() const { return cfg_; }
  long long t() const { return t_; }
  std::vector<double>& m() { return m_; }
  std::vector<double>& v() { return v_; }
  const std::vector<double>& m() const { return m_; }
  const std::vector<double>& v() const { return v_; }
  void set_t(long long t) { t_ = t; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  long long t_ = 0;
};

// Scales grad so its L2 norm is at most max_norm; returns the norm before.
double clip_grad_norm(std::vector<double>& grad, double max_norm);

}  // namespace dtcoin::orra

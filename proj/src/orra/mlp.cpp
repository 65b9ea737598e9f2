#include "dtcoin/orra/mlp.hpp"

#include <cmath>
#include <random>

namespace dtcoin::orra {

Mlp::Mlp(std::vector<int> sizes, Rng& rng) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw Error(Errc::kConfig, "network needs an input and an output layer");
  for (int s : sizes_) {
    if (s < 1) throw Error(Errc::kConfig, "layer sizes must be >= 1");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    std::normal_distribution<double> w(0.0, std::sqrt(2.0 / sizes_[l]));
    const std::size_t n = static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1];
    for (std::size_t i = 0; i < n; ++i) params_[offsets_[l] + i] = w(rng);
  }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Cache c;
  return forward(input, c);
}

std::vector<double> Mlp::forward(std::span<const double> input, Cache& cache) const {
  if (static_cast<int>(input.size()) != input_size()) throw Error(Errc::kConfig, "input size mismatch");
  const std::size_t layers = sizes_.size() - 1;
  cache.act.resize(layers + 1);
  cache.act[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    const double* b = w + static_cast<std::size_t>(in) * out;
    const auto& x = cache.act[l];
    auto& y = cache.act[l + 1];
    y.assign(b, b + out);
    double* yp = y.data();
    for (int i = 0; i < in; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      const double* row = w + static_cast<std::size_t>(i) * out;
      for (int o = 0; o < out; ++o) yp[o] += xi * row[o];
    }
    if (l + 1 < layers) {
      for (int o = 0; o < out; ++o) yp[o] = yp[o] < 0.0 ? 0.0 : yp[o];
    }
  }
  return cache.act.back();
}

void Mlp::backward(const Cache& cache, std::span<const double> d_output, std::vector<double>& grad) const {
  if (grad.size() != params_.size()) grad.assign(params_.size(), 0.0);
  const std::size_t layers = sizes_.size() - 1;
  std::vector<double> delta(d_output.begin(), d_output.end());
  std::vector<double> prev;
  std::vector<int> nz;
  for (std::size_t l = layers; l-- > 0;) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    double* gw = grad.data() + offsets_[l];
    double* gb = gw + static_cast<std::size_t>(in) * out;
    const auto& x = cache.act[l];
    nz.clear();
    for (int o = 0; o < out; ++o) {
      if (delta[o] != 0.0) nz.push_back(o);
    }
    for (int o : nz) gb[o] += delta[o];
    for (int i = 0; i < in; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      double* grow = gw + static_cast<std::size_t>(i) * out;
      for (int o : nz) grow[o] += xi * delta[o];
    }
    if (l == 0) break;
    prev.assign(in, 0.0);
    for (int i = 0; i < in; ++i) {
      // ReLU derivative on the hidden activation feeding this layer.
      if (x[i] <= 0.0) continue;
      const double* row = w + static_cast<std::size_t>(i) * out;
      double acc = 0.0;
      for (int o : nz) acc += row[o] * delta[o];
      prev[i] = acc;
    }
    delta.swap(prev);
  }
}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
    params[i] -= cfg_.lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.eps);
  }
}

double clip_grad_norm(std::vector<double>& grad, double max_norm) {
  double s = 0.0;
  for (double g : grad) s += g * g;
  const double norm = std::sqrt(s);
  if (norm > max_norm && norm > 0.0) {
    const double k = max_norm / norm;
    for (double& g : grad) g *= k;
  }
  return norm;
}

}  // namespace dtcoin::orra

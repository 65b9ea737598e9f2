#include "dtcoin/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace dtcoin::channel {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double path_loss_db(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw Error(Errc::kInvalidGeometry, "distance must be finite and > 0");
  return -35.3 - 37.6 * std::log10(d);
}

double path_loss_gain(double d) { return std::pow(10.0, path_loss_db(d) / 10.0); }

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inv(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::kDomain, "q_inv needs eps in (0, 1)");
  if (eps == 0.5) return 0.0;
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    // Q is decreasing.
    if (q_function(mid) > eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double a = std::abs(q_function(lo) - eps);
  const double b = std::abs(q_function(hi) - eps);
  return a <= b ? lo : hi;
}

double shannon_rate(double gamma, double bandwidth) { return bandwidth * std::log2(1.0 + gamma); }

double finite_blocklength_penalty(double gamma, double bandwidth, double blocklength, double eps) {
  if (!(gamma >= 0.0)) throw Error(Errc::kDomain, "SINR must be >= 0");
  if (!(blocklength >= 1.0)) throw Error(Errc::kDomain, "blocklength must be >= 1");
  const double v = 1.0 - 1.0 / ((1.0 + gamma) * (1.0 + gamma));
  return bandwidth * std::sqrt(v / blocklength) * q_inv(eps) / std::numbers::ln2;
}

double urllc_rate(double gamma, double bandwidth, double blocklength, double eps) {
  const double penalty = finite_blocklength_penalty(gamma, bandwidth, blocklength, eps);
  return std::max(0.0, shannon_rate(gamma, bandwidth) - penalty);
}

double tx_latency(std::span<const double> ratios, double bits, std::span<const double> rates) {
  if (ratios.size() != rates.size()) throw Error(Errc::kConfig, "ratios and rates differ in length");
  double worst = 0.0;
  for (std::size_t j = 0; j < ratios.size(); ++j) {
    if (!(ratios[j] >= 0.0 && ratios[j] <= 1.0)) throw Error(Errc::kDomain, "ratios must lie in [0, 1]");
    if (ratios[j] == 0.0) continue;
    if (!(rates[j] > 0.0)) throw Error(Errc::kUnreachable, "nonzero ratio towards a destination with zero rate");
    worst = std::max(worst, ratios[j] * bits / rates[j]);
  }
  return worst;
}

double ChannelParams::noise_power() const {
  return std::pow(10.0, (noise_dbm_per_hz - 30.0) / 10.0) * bandwidth;
}

void ChannelParams::validate() const {
  if (antennas < 1) throw Error(Errc::kConfig, "antenna count must be >= 1");
  if (!(bandwidth > 0.0)) throw Error(Errc::kConfig, "bandwidth must be > 0");
  if (!(blocklength >= 1.0)) throw Error(Errc::kConfig, "blocklength must be >= 1");
  if (!(eps > 0.0 && eps <= 0.5)) throw Error(Errc::kConfig, "eps must lie in (0, 0.5]");
}

double ChannelRealization::norm2(int m) const {
  double s = 0.0;
  for (const auto& c : vec(m)) s += std::norm(c);
  return s;
}

ChannelRealization draw_channel(std::span<const Point> users, Point receiver, const ChannelParams& params, Rng& rng) {
  params.validate();
  ChannelRealization ch;
  ch.antennas = params.antennas;
  ch.users = static_cast<int>(users.size());
  ch.noise = params.noise_power();
  ch.bandwidth = params.bandwidth;
  ch.blocklength = params.blocklength;
  ch.eps = params.eps;
  ch.g.resize(users.size());
  ch.h.resize(users.size() * static_cast<std::size_t>(params.antennas));
  std::normal_distribution<double> n01(0.0, std::sqrt(0.5));
  for (std::size_t m = 0; m < users.size(); ++m) {
    ch.g[m] = path_loss_gain(distance(users[m], receiver));
    const double amp = std::sqrt(ch.g[m]);
    for (int l = 0; l < params.antennas; ++l) {
      const double re = n01(rng);
      const double im = n01(rng);
      ch.h[m * params.antennas + l] = amp * std::complex<double>(re, im);
    }
  }
  return ch;
}

TransmitConfig TransmitConfig::strongest_first(const ChannelRealization& ch, std::vector<double> power) {
  TransmitConfig cfg;
  cfg.power = std::move(power);
  cfg.order.resize(ch.users);
  std::iota(cfg.order.begin(), cfg.order.end(), 0);
  std::vector<double> n(ch.users);
  for (int m = 0; m < ch.users; ++m) n[m] = ch.norm2(m);
  std::stable_sort(cfg.order.begin(), cfg.order.end(), [&](int a, int b) { return n[a] > n[b]; });
  return cfg;
}

void TransmitConfig::validate(int users) const {
  if (static_cast<int>(power.size()) != users || static_cast<int>(order.size()) != users) {
    throw Error(Errc::kConfig, "transmit config size does not match user count");
  }
  std::vector<bool> seen(users, false);
  for (int m : order) {
    if (m < 0 || m >= users || seen[m]) throw Error(Errc::kConfig, "decode order must be a permutation");
    seen[m] = true;
  }
  for (double p : power) {
    if (!(p > 0.0)) throw Error(Errc::kConfig, "transmit power must be > 0");
  }
}

double sinr(int m, const TransmitConfig& cfg, const ChannelRealization& ch) {
  cfg.validate(ch.users);
  if (m < 0 || m >= ch.users) throw Error(Errc::kIndexOutOfRange, "user index out of range");
  const double hm2 = ch.norm2(m);
  if (!(hm2 > 0.0)) throw Error(Errc::kDegenerateChannel, "zero channel vector");
  const auto pos = std::find(cfg.order.begin(), cfg.order.end(), m) - cfg.order.begin();
  const auto hm = ch.vec(m);
  double interference = 0.0;
  for (std::size_t i = static_cast<std::size_t>(pos) + 1; i < cfg.order.size(); ++i) {
    const int n = cfg.order[i];
    const auto hn = ch.vec(n);
    std::complex<double> ip = 0.0;
    for (int l = 0; l < ch.antennas; ++l) ip += std::conj(hm[l]) * hn[l];
    interference += cfg.power[n] * std::norm(ip) / hm2;
  }
  return cfg.power[m] * hm2 / (interference + ch.noise);
}

std::vector<double> uplink_rates(const ChannelRealization& ch, const TransmitConfig& cfg) {
  std::vector<double> r(ch.users);
  for (int m = 0; m < ch.users; ++m) r[m] = urllc_rate(sinr(m, cfg, ch), ch.bandwidth, ch.blocklength, ch.eps);
  return r;
}

}  // namespace dtcoin::channel

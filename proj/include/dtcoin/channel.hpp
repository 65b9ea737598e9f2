#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dtcoin/common.hpp"

namespace dtcoin::channel {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

// PL(d) = -35.3 - 37.6 log10(d) dB.
double path_loss_db(double d);
double path_loss_gain(double d);

double q_function(double x);
double q_inv(double eps);

double shannon_rate(double gamma, double bandwidth);
// B sqrt(V/N) Q^-1(eps) / ln 2 with V = 1 - (1 + gamma)^-2. Not clamped.
double finite_blocklength_penalty(double gamma, double bandwidth, double blocklength, double eps);
// Shannon term minus the penalty, clamped at 0.
double urllc_rate(double gamma, double bandwidth, double blocklength, double eps);

// max over destinations of ratio * bits / rate.
double tx_latency(std::span<const double> ratios, double bits, std::span<const double> rates);

struct ChannelParams {
  int antennas = 4;
  double noise_dbm_per_hz = -174.0;
  double bandwidth = 10e6;
  double blocklength = 256.0;
  double eps = 1e-9;

  double noise_power() const;  // watts over the whole band
  void validate() const;
};

// Uplink channels of M transmitters towards one L-antenna receiver.
struct ChannelRealization {
  int antennas = 0;
  int users = 0;
  std::vector<std::complex<double>> h;  // [m * L + l], large-scale gain included
  std::vector<double> g;                // large-scale gain per user
  double noise = 0.0;
  double bandwidth = 0.0;
  double blocklength = 0.0;
  double eps = 0.0;

  std::span<const std::complex<double>> vec(int m) const {
    return {h.data() + static_cast<std::size_t>(m) * antennas, static_cast<std::size_t>(antennas)};
  }
  double norm2(int m) const;
};

// Rayleigh small-scale fading CN(0, I) scaled by the path-loss gain.
ChannelRealization draw_channel(std::span<const Point> users, Point receiver, const ChannelParams& params, Rng& rng);

struct TransmitConfig {
  std::vector<double> power;
  std::vector<int> order;  // SIC decode order; order[0] decoded first

  // Decode order by descending channel norm.
  static TransmitConfig strongest_first(const ChannelRealization& ch, std::vector<double> power);
  void validate(int users) const;
};

// p_m |h_m|^2 / (sum_{n decoded after m} p_n |h_m^H h_n|^2 / |h_m|^2 + N0).
double sinr(int m, const TransmitConfig& cfg, const ChannelRealization& ch);

std::vector<double> uplink_rates(const ChannelRealization& ch, const TransmitConfig& cfg);

}  // namespace dtcoin::channel

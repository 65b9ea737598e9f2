#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "dtcoin/channel.hpp"
#include "test_util.hpp"

using namespace dtcoin;
using namespace dtcoin::channel;
using dtcoin::testing::error_code;
using dtcoin::testing::rel_err;

namespace {

using Hp = boost::multiprecision::cpp_dec_float_50;

Hp q_high_precision(double x) {
  const Hp hx = x;
  return boost::math::erfc(hx / boost::multiprecision::sqrt(Hp(2))) / 2;
}

}  // namespace

TEST_CASE("path loss") {
  CHECK(rel_err(path_loss_gain(1.0), std::pow(10.0, -3.53)) < 1e-14);
  CHECK(rel_err(path_loss_gain(10.0), std::pow(10.0, (-35.3 - 37.6) / 10.0)) < 1e-14);
  CHECK(path_loss_gain(5.0) > path_loss_gain(50.0));
  CHECK(error_code([] { path_loss_gain(0.0); }) == Errc::kInvalidGeometry);
  CHECK(error_code([] { path_loss_db(-1.0); }) == Errc::kInvalidGeometry);
  CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
}

TEST_CASE("Q-function inverse") {
  CHECK(q_inv(0.5) == 0.0);
  for (double e : {1e-3, 0.1, 0.3}) CHECK(q_inv(e) == doctest::Approx(-q_inv(1.0 - e)).epsilon(1e-12));
  const double x = q_inv(1e-9);
  const Hp err = boost::multiprecision::abs(q_high_precision(x) - Hp(1e-9)) / Hp(1e-9);
  CHECK(err.convert_to<double>() <= 1e-9);
  CHECK(x == doctest::Approx(5.997807).epsilon(1e-6));
  CHECK(error_code([] { q_inv(0.0); }) == Errc::kDomain);
  CHECK(error_code([] { q_inv(1.0); }) == Errc::kDomain);
}

TEST_CASE("URLLC rate") {
  const double b = 10e6;
  CHECK(urllc_rate(0.0, b, 256, 1e-9) == 0.0);
  CHECK(urllc_rate(7.3, b, 256, 0.5) == shannon_rate(7.3, b));
  // Shannon minus the dispersion penalty, written out.
  const double g = 3.0;
  const double v = 1.0 - 1.0 / ((1.0 + g) * (1.0 + g));
  const double expected = b * std::log2(1.0 + g) - b * std::sqrt(v / 256.0) * q_inv(1e-9) / std::log(2.0);
  CHECK(rel_err(urllc_rate(g, b, 256, 1e-9), expected) < 1e-12);
  const double p64 = finite_blocklength_penalty(g, b, 64, 1e-9);
  for (double n : {256.0, 1024.0, 1e9}) {
    CHECK(rel_err(finite_blocklength_penalty(g, b, n, 1e-9), p64 * std::sqrt(64.0 / n)) < 1e-3);
  }
  CHECK(rel_err(urllc_rate(g, b, 1e9, 1e-9), shannon_rate(g, b)) < 1e-3);
  CHECK(urllc_rate(1e-6, b, 8, 1e-9) == 0.0);
  CHECK(error_code([] { finite_blocklength_penalty(1.0, 1e6, 0.0, 1e-9); }) == Errc::kDomain);
}

TEST_CASE("transmission latency") {
  const std::vector<double> none = {0.0, 0.0};
  const std::vector<double> rates = {1e6, 2e6};
  CHECK(tx_latency(none, 1e6, rates) == 0.0);
  const std::vector<double> one = {1.0, 0.0};
  CHECK(tx_latency(one, 1e6, rates) == doctest::Approx(1.0));
  const std::vector<double> split = {0.3, 0.7};
  CHECK(tx_latency(split, 1e6, rates) == doctest::Approx(0.35));
  const std::vector<double> dead = {1e6, 0.0};
  CHECK(error_code([&] { tx_latency(split, 1e6, dead); }) == Errc::kUnreachable);
}

TEST_CASE("SINR with successive interference cancellation") {
  ChannelRealization ch;
  ch.antennas = 2;
  ch.users = 2;
  using C = std::complex<double>;
  ch.h = {C(1, 0), C(0, 1), C(1, 0), C(1, 0)};
  ch.g = {1.0, 1.0};
  ch.noise = 0.5;
  ch.bandwidth = 1e6;
  ch.blocklength = 256;
  ch.eps = 1e-9;
  TransmitConfig cfg{{2.0, 3.0}, {0, 1}};
  // |h0^H h1|^2 = |1 - i|^2 = 2, |h0|^2 = 2, so user 0 sees 3 * 2 / 2 of interference.
  CHECK(sinr(0, cfg, ch) == doctest::Approx(2.0 * 2.0 / (3.0 + 0.5)));
  CHECK(sinr(1, cfg, ch) == doctest::Approx(3.0 * 2.0 / 0.5));

  ChannelRealization single = ch;
  single.users = 1;
  single.h.resize(2);
  TransmitConfig solo{{2.0}, {0}};
  CHECK(sinr(0, solo, single) == doctest::Approx(2.0 * 2.0 / 0.5));

  ChannelRealization zero = ch;
  zero.h[0] = zero.h[1] = C(0, 0);
  CHECK(error_code([&] { sinr(0, cfg, zero); }) == Errc::kDegenerateChannel);
}

TEST_CASE("channel draws are reproducible") {
  const std::vector<Point> users = {{10, 20}, {-30, 5}, {50, -40}};
  ChannelParams p;
  Rng a(9), b(9);
  const auto ca = draw_channel(users, {0, 0}, p, a);
  const auto cb = draw_channel(users, {0, 0}, p, b);
  CHECK(ca.h == cb.h);
  const auto cfg = TransmitConfig::strongest_first(ca, {0.5, 0.5, 0.5});
  const auto rates = uplink_rates(ca, cfg);
  CHECK(rates.size() == 3u);
  for (double r : rates) CHECK(r >= 0.0);
  for (std::size_t i = 1; i < cfg.order.size(); ++i) CHECK(ca.norm2(cfg.order[i - 1]) >= ca.norm2(cfg.order[i]));
}

#include "dtcoin/harness/stats.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "dtcoin/common.hpp"

namespace dtcoin::harness {

Summary summarize(std::span<const double> x) {
  Summary s;
  s.n = static_cast<int>(x.size());
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b, double confidence) {
  if (a.size() != b.size()) throw Error(Errc::kDomain, "paired samples differ in size");
  if (a.size() < 2) throw Error(Errc::kDomain, "paired test needs at least two pairs");
  if (!(confidence > 0.0 && confidence < 1.0)) throw Error(Errc::kDomain, "confidence must lie in (0, 1)");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const Summary s = summarize(d);

  PairedTest r;
  r.n = s.n;
  r.mean_diff = s.mean;
  r.sd_diff = s.stddev;
  const double se = s.stddev / std::sqrt(static_cast<double>(s.n));
  boost::math::students_t dist(s.n - 1);
  if (se > 0.0) {
    r.t = s.mean / se;
    r.p_greater = boost::math::cdf(boost::math::complement(dist, r.t));
    r.lower_bound = s.mean - boost::math::quantile(dist, confidence) * se;
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    r.t = s.mean > 0.0 ? inf : (s.mean < 0.0 ? -inf : 0.0);
    r.p_greater = s.mean > 0.0 ? 0.0 : 1.0;
    r.lower_bound = s.mean;
  }
  return r;
}

}  // namespace dtcoin::harness

#pragma once

#include <span>

namespace dtcoin::harness {

struct Summary {
  int n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1)
};

Summary summarize(std::span<const double> x);

struct PairedTest {
  int n = 0;
  double mean_diff = 0.0;
  double sd_diff = 0.0;
  double t = 0.0;
  double p_greater = 1.0;      // one-sided p-value for mean(a - b) > 0
  double lower_bound = 0.0;    // one-sided lower confidence bound on mean(a - b)
};

// Paired t-test of a against b. Needs n >= 2; a zero-variance difference
// gives t = +-inf (or 0) and the matching degenerate p-value.
PairedTest paired_t_test(std::span<const double> a, std::span<const double> b, double confidence = 0.95);

}  // namespace dtcoin::harness

#pragma once

#include <cmath>
#include <optional>

#include "dtcoin/common.hpp"

namespace dtcoin::testing {

template <class F>
std::optional<Errc> error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace dtcoin::testing

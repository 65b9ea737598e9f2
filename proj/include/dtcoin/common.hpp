#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtcoin {

inline constexpr const char* kVersion = "0.3.0";

// Every failure the library reports carries one of these codes so callers
// (and the CLI exit-code mapping) can branch without string matching.
enum class Errc {
  kInvalidResolution,
  kIndexOutOfRange,
  kInvalidObservation,
  kDegenerateEvidence,
  kEmptyConfiguration,
  kConvergence,
  kInvalidGeometry,
  kDegenerateChannel,
  kDomain,
  kUnreachable,
  kInvalidTwinDeviation,
  kConstraintViolation,
  kConfig,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(Errc::kConvergence, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

using Rng = std::mt19937_64;

// Dense row-major matrix; only what the belief filter and planner need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace dtcoin

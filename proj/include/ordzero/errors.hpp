#pragma once

#include <stdexcept>
#include <string>

namespace ordzero {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A product or series could not reach its tail tolerance within max_terms.
class TruncationFailure : public Error {
 public:
  using Error::Error;
};

/// Coefficients 2^-l_n are not representable in the requested precision.
class PrecisionOverflow : public Error {
 public:
  PrecisionOverflow(int level, int exponent, int required_bits)
      : Error("level n=" + std::to_string(level) + " needs 2^-" + std::to_string(exponent) +
              ", which requires a big-float with at least " + std::to_string(required_bits) +
              " mantissa bits and an unbounded exponent range"),
        level_(level),
        required_bits_(required_bits) {}

  int level() const noexcept { return level_; }
  int required_bits() const noexcept { return required_bits_; }

 private:
  int level_;
  int required_bits_;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

class QuadratureUnderresolved : public Error {
 public:
  using Error::Error;
};

class SubharmonicityViolation : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Orbit left the representable range.
class Overflow : public Error {
 public:
  using Error::Error;
};

class DegenerateJacobian : public Error {
 public:
  using Error::Error;
};

class PrimitivityFailure : public Error {
 public:
  using Error::Error;
};

class OrbitResidualTooLarge : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; field() names the offending JSON path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ordzero

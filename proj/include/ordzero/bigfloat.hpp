#pragma once

// MPFR-backed big-float with runtime precision.

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/mpfr.hpp>

namespace ordzero {

using BigReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

inline unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 2;
}

/// Sets the default BigReal precision for the lifetime of the guard.
/// Values must be created while the guard is active to carry its precision.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned bits) : saved_(BigReal::default_precision()) {
    BigReal::default_precision(bits_to_digits10(std::max(bits, 64u)));
  }
  ~ScopedPrecision() { BigReal::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

}  // namespace ordzero

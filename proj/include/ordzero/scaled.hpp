#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "ordzero/numeric.hpp"

namespace ordzero {

/// Complex number stored as mantissa * 2^exponent.
///
/// Long products (hundreds of factors of size up to 2^12) leave the range of
/// binary64; the mantissa is renormalised whenever its magnitude leaves
/// [2^-kRescaleBits, 2^kRescaleBits], so intermediate values never overflow or
/// flush to zero. For MPFR reals the rescale is harmless and rarely triggers.
template <class Real>
class Scaled {
 public:
  static constexpr int kRescaleBits = 480;

  Scaled() = default;
  Scaled(const Complex<Real>& m) : mant_(m) { normalize(); }  // NOLINT(implicit)
  Scaled(const Complex<Real>& m, std::int64_t e) : mant_(m), exp2_(e) { normalize(); }

  static Scaled one() { return Scaled(Complex<Real>(Real(1), Real(0))); }
  static Scaled zero() { return Scaled(); }

  const Complex<Real>& mantissa() const { return mant_; }
  std::int64_t exponent() const { return exp2_; }
  bool is_zero() const { return mant_.real() == 0 && mant_.imag() == 0; }

  /// Value as a plain complex; may overflow to inf or flush to 0.
  Complex<Real> value() const {
    using std::ldexp;
    if (is_zero()) return mant_;
    const auto e = clamp_exp(exp2_);
    return {ldexp(mant_.real(), e), ldexp(mant_.imag(), e)};
  }

  /// log2 |value|; -inf for zero.
  double log2_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    using std::abs;
    using std::log2;
    return to_double(Real(log2(abs(mant_)))) + static_cast<double>(exp2_);
  }

  double log_abs() const { return log2_abs() * 0.69314718055994530942; }

  Scaled& operator*=(const Scaled& o) {
    mant_ *= o.mant_;
    exp2_ += o.exp2_;
    normalize();
    return *this;
  }
  Scaled& operator*=(const Complex<Real>& c) {
    mant_ *= c;
    normalize();
    return *this;
  }
  Scaled& operator+=(const Scaled& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    using std::ldexp;
    if (exp2_ >= o.exp2_) {
      const auto shift = clamp_exp(o.exp2_ - exp2_);
      mant_ += Complex<Real>(ldexp(o.mant_.real(), shift), ldexp(o.mant_.imag(), shift));
    } else {
      const auto shift = clamp_exp(exp2_ - o.exp2_);
      mant_ = Complex<Real>(ldexp(mant_.real(), shift), ldexp(mant_.imag(), shift)) + o.mant_;
      exp2_ = o.exp2_;
    }
    normalize();
    return *this;
  }

  friend Scaled operator*(Scaled a, const Scaled& b) { return a *= b; }
  friend Scaled operator*(Scaled a, const Complex<Real>& b) { return a *= b; }
  friend Scaled operator+(Scaled a, const Scaled& b) { return a += b; }
  friend Scaled operator-(const Scaled& a) { return Scaled(-a.mant_, a.exp2_); }
  friend Scaled operator-(Scaled a, const Scaled& b) { return a += -b; }

  /// a / b; b must be nonzero.
  friend Scaled operator/(const Scaled& a, const Scaled& b) {
    return Scaled(a.mant_ / b.mant_, a.exp2_ - b.exp2_);
  }

 private:
  static int clamp_exp(std::int64_t e) {
    constexpr std::int64_t lim = std::numeric_limits<int>::max() / 2;
    return static_cast<int>(e > lim ? lim : (e < -lim ? -lim : e));
  }

  void normalize() {
    if (is_zero()) {
      exp2_ = 0;
      return;
    }
    using std::frexp;
    using std::ldexp;
    int e = 0;
    frexp(norm_inf(mant_), &e);
    if (e > kRescaleBits || e < -kRescaleBits) {
      mant_ = Complex<Real>(ldexp(mant_.real(), -e), ldexp(mant_.imag(), -e));
      exp2_ += e;
    }
  }

  Complex<Real> mant_{Real(0), Real(0)};
  std::int64_t exp2_ = 0;
};

/// Value and first derivative of a product, accumulated by the product rule.
/// At a root of one factor the derivative is exactly the leave-one-out product.
template <class Real>
struct Jet {
  Scaled<Real> value = Scaled<Real>::one();
  Scaled<Real> deriv = Scaled<Real>::zero();

  /// Multiply by a factor f with derivative df.
  void mul(const Complex<Real>& f, const Complex<Real>& df) {
    deriv = deriv * f + value * df;
    value *= f;
  }
  void mul(const Jet& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
  }
};

}  // namespace ordzero

#pragma once

// Scalar helpers shared by the double and big-float evaluation paths.
// Every routine is written against ADL so that the same template code runs
// on double and on boost::multiprecision MPFR numbers.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include <boost/math/constants/constants.hpp>

namespace ordzero {

template <class Real>
using Complex = std::complex<Real>;

template <class Real>
inline Real pi() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real two_pi() {
  return boost::math::constants::two_pi<Real>();
}

/// e^{2 pi i k / p}, computed from the polar form (no repeated multiplication).
template <class Real>
inline Complex<Real> unit_root(long k, long p) {
  using std::cos;
  using std::sin;
  k %= p;
  if (k < 0) k += p;
  if (k == 0) return Complex<Real>(Real(1), Real(0));
  // Exact values for the quarter turns keep lattice points bit-symmetric.
  if (4 * k == p) return Complex<Real>(Real(0), Real(1));
  if (2 * k == p) return Complex<Real>(Real(-1), Real(0));
  if (4 * k == 3 * p) return Complex<Real>(Real(0), Real(-1));
  const Real theta = two_pi<Real>() * Real(k) / Real(p);
  return Complex<Real>(cos(theta), sin(theta));
}

template <class Real>
inline Real pow2(long e) {
  using std::ldexp;
  return ldexp(Real(1), static_cast<int>(e));
}

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <class Real>
inline std::complex<double> to_double(const Complex<Real>& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

/// max(|re|, |im|); cheaper than abs and never overflows.
template <class Real>
inline Real norm_inf(const Complex<Real>& z) {
  using std::abs;
  const Real a = abs(z.real());
  const Real b = abs(z.imag());
  return a > b ? a : b;
}

/// Euclidean norm of a point of C^2.
template <class Real>
inline Real norm2(const Complex<Real>& z, const Complex<Real>& w) {
  using std::sqrt;
  return sqrt(std::norm(z) + std::norm(w));
}

}  // namespace ordzero

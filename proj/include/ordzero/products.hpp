#pragma once

// Infinite products over the geometric sequence 2^j and the root-of-unity
// polynomials whose zeros form the periodic lattice.
//
//   Q(w)   = prod_{j>=1} (1 - w/2^j)
//   Q_n(w) = prod_{j!=n} (1 - w/2^j)
//   P_n(z) = prod_{j=1..m_n} prod_{l=0..p_n-1} (z - e^{2 pi i l/p_n}/j)

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ordzero/errors.hpp"
#include "ordzero/numeric.hpp"
#include "ordzero/scaled.hpp"
#include "ordzero/schedule.hpp"

namespace ordzero {

/// Truncation rule for Q-type products. The tolerance is kept as log2 so that
/// big-float evaluations can ask for tails far below the double range.
struct TruncationPolicy {
  double log2_eps = std::log2(1e-16);
  int max_terms = 4096;

  static TruncationPolicy from_eps(double eps, int max_terms = 4096) {
    TruncationPolicy p;
    p.log2_eps = std::log2(eps);
    p.max_terms = max_terms;
    p.validate();
    return p;
  }
  /// Tail tolerance matched to a big-float mantissa.
  static TruncationPolicy for_bits(unsigned bits, int max_terms = 1 << 16) {
    TruncationPolicy p;
    p.log2_eps = -static_cast<double>(bits) - 8.0;
    p.max_terms = max_terms;
    return p;
  }

  double eps() const { return std::exp2(log2_eps); }

  void validate() const {
    if (!std::isfinite(log2_eps)) throw TruncationFailure("truncation eps must be > 0");
    if (max_terms < 8) throw TruncationFailure("truncation max_terms must be >= 8");
  }
};

/// J = max(ceil(log2(2 max(|w|,1)/eps)), 8): sum_{j>J} |w|/2^j <= eps/2 bounds
/// the value tail, and the floor |w| >= 1 also bounds the derivative tail 2^-J.
inline int truncation_terms(double abs_w, const TruncationPolicy& policy) {
  policy.validate();
  int terms = 8;
  {
    const double need = std::ceil(std::log2(2.0 * std::max(abs_w, 1.0)) - policy.log2_eps);
    if (need > static_cast<double>(policy.max_terms))
      throw TruncationFailure("product tail for |w|=" + std::to_string(abs_w) + " needs " +
                              std::to_string(need) + " factors, above max_terms=" +
                              std::to_string(policy.max_terms));
    terms = std::max(terms, static_cast<int>(need));
  }
  return terms;
}

/// log2 of the relative tail bound exp(|w| 2^-J) - 1 of a truncated product.
inline double tail_log2(double abs_w, int terms) {
  if (abs_w == 0) return -std::numeric_limits<double>::infinity();
  const double lx = std::log2(abs_w) - terms;
  if (lx > -1000) return std::log2(std::expm1(std::exp2(lx)));
  return lx + 1e-300;  // expm1(x) = x(1 + O(x)) below double range
}

/// Q(w), its derivative, and Q_n(w), Q_n'(w) for a list of skipped indices,
/// all from one pass over the factors.
template <class Real>
class QFactors {
 public:
  QFactors() = default;

  QFactors(const Complex<Real>& w, const TruncationPolicy& policy, std::vector<int> skip = {})
      : w_(w), skip_(std::move(skip)) {
    using std::abs;
    const double aw = to_double(Real(abs(w)));
    terms_ = truncation_terms(aw, policy);
    tail_log2_ = tail_log2(aw, terms_);

    std::sort(skip_.begin(), skip_.end());
    skip_.erase(std::unique(skip_.begin(), skip_.end()), skip_.end());

    Jet<Real> rest;
    for (int j = 1; j <= terms_; ++j) {
      if (std::binary_search(skip_.begin(), skip_.end(), j)) continue;
      const Real s = pow2<Real>(-j);
      rest.mul(factor(j), Complex<Real>(-s, Real(0)));
    }
    full_ = rest;
    for (int s : skip_)
      if (s >= 1 && s <= terms_) full_.mul(factor(s), Complex<Real>(-pow2<Real>(-s), Real(0)));
    excl_.reserve(skip_.size());
    for (int n : skip_) {
      Jet<Real> q = rest;
      for (int s : skip_)
        if (s != n && s >= 1 && s <= terms_)
          q.mul(factor(s), Complex<Real>(-pow2<Real>(-s), Real(0)));
      excl_.push_back(q);
    }
  }

  const Complex<Real>& w() const { return w_; }
  int terms() const { return terms_; }
  double tail_log2_rel() const { return tail_log2_; }
  double tail_rel() const { return std::exp2(tail_log2_); }

  const Jet<Real>& q() const { return full_; }

  /// Q_n for a skipped index n; falls back to direct evaluation otherwise.
  Jet<Real> q_excluding(int n, const TruncationPolicy& policy) const {
    auto it = std::lower_bound(skip_.begin(), skip_.end(), n);
    if (it != skip_.end() && *it == n) return excl_[static_cast<std::size_t>(it - skip_.begin())];
    return QFactors(w_, policy, {n}).excl_.front();
  }
  const Jet<Real>* find_excluding(int n) const {
    auto it = std::lower_bound(skip_.begin(), skip_.end(), n);
    if (it != skip_.end() && *it == n) return &excl_[static_cast<std::size_t>(it - skip_.begin())];
    return nullptr;
  }

 private:
  Complex<Real> factor(int j) const {
    const Real s = pow2<Real>(-j);
    return Complex<Real>(Real(1) - w_.real() * s, -w_.imag() * s);
  }

  Complex<Real> w_{};
  std::vector<int> skip_;
  int terms_ = 0;
  double tail_log2_ = 0;
  Jet<Real> full_;
  std::vector<Jet<Real>> excl_;
};

template <class Real>
struct QValue {
  Complex<Real> value;
  double tail_bound = 0;  ///< absolute bound on |Q_true - value|
  int terms = 0;
};

template <class Real = double>
QValue<Real> eval_Q(const Complex<Real>& w, const TruncationPolicy& policy = {}) {
  QFactors<Real> f(w, policy);
  QValue<Real> out;
  out.value = f.q().value.value();
  out.terms = f.terms();
  out.tail_bound = std::exp2(f.q().value.log2_abs() + f.tail_log2_rel());
  return out;
}

template <class Real = double>
Complex<Real> eval_Qn(int n, const Complex<Real>& w, const TruncationPolicy& policy = {}) {
  if (n < 1) throw TruncationFailure("Q_n requires n >= 1");
  return QFactors<Real>(w, policy, {n}).q_excluding(n, policy).value.value();
}

template <class Real = double>
Complex<Real> eval_Q_deriv(const Complex<Real>& w, const TruncationPolicy& policy = {}) {
  return QFactors<Real>(w, policy).q().deriv.value();
}

/// Roots e^{2 pi i l/p}/j, j = 1..m, l = 0..p-1, ordered by (j, l).
template <class Real = double>
std::vector<Complex<Real>> lattice_roots(int period, int rate) {
  std::vector<Complex<Real>> roots;
  roots.reserve(static_cast<std::size_t>(period) * static_cast<std::size_t>(rate));
  for (int j = 1; j <= rate; ++j)
    for (int l = 0; l < period; ++l) roots.push_back(unit_root<Real>(l, period) / Real(j));
  return roots;
}

/// P(z) and P'(z) for the monic polynomial with the given roots.
template <class Real>
Jet<Real> root_product(const std::vector<Complex<Real>>& roots, const Complex<Real>& z) {
  Jet<Real> jet;
  const Complex<Real> one(Real(1), Real(0));
  for (const auto& r : roots) jet.mul(z - r, one);
  return jet;
}

template <class Real = double>
Complex<Real> eval_Pn(const Schedule& s, int n, const Complex<Real>& z) {
  return root_product(lattice_roots<Real>(s.period(n), s.rate(n)), z).value.value();
}

template <class Real = double>
Complex<Real> eval_Pn_deriv(const Schedule& s, int n, const Complex<Real>& z) {
  return root_product(lattice_roots<Real>(s.period(n), s.rate(n)), z).deriv.value();
}

/// One point (e^{2 pi i l/p_n}/j, 2^n) of the zero lattice.
struct LatticePoint {
  int n = 0;
  int j = 1;
  int ell = 0;
  std::complex<double> z;
  std::complex<double> w;
};

inline LatticePoint make_lattice_point(int n, int period, int j, int ell) {
  return {n, j, ell, unit_root<double>(ell, period) / double(j),
          std::complex<double>(std::ldexp(1.0, n), 0.0)};
}

}  // namespace ordzero

#pragma once

// The symmetrised Cornalba-Shiffman map
//
//   g1(z, w) = sum_n 2^{-l_n} Q_n(w) P_n(z)
//   g2(z, w) = Q(w)
//
// whose zero set contains the lattice {(e^{2 pi i l/p_n}/j, 2^n)}.

#include <cmath>
#include <type_traits>
#include <vector>

#include "ordzero/errors.hpp"
#include "ordzero/numeric.hpp"
#include "ordzero/products.hpp"
#include "ordzero/scaled.hpp"
#include "ordzero/schedule.hpp"

namespace ordzero {

/// Largest l for which 2^-l is still a normal binary64 with headroom for the
/// product factors that multiply it.
inline constexpr int kDoubleMaxExponent = 960;

template <class Real>
struct GValue {
  Complex<Real> g1;
  Complex<Real> g2;
  double tail_bound = 0;  ///< absolute bound on the product truncation error in g1 and g2
};

/// dG at a point, entries kept in scaled form so that 2^-l_n factors survive.
template <class Real>
struct GJacobian {
  Scaled<Real> d1dz, d1dw, d2dz, d2dw;
};

/// log2 of a bound on |2^-l Q_n(w) P_n(z)| that needs no evaluation:
/// |P_n(z)| <= (|z|+1)^{m p}, |Q_n(w)| <= exp(2 log^2 |w| + 1) for |w| >= 2.
inline double log2_term_bound(int period, int rate, int exponent, double abs_z, double abs_w) {
  const double lw = std::log(std::max(abs_w, 2.0));
  return -exponent + double(period) * rate * std::log2(abs_z + 1.0) + (2.0 * lw * lw + 1.0) / std::log(2.0);
}

template <class Real = double>
class CSFunction {
 public:
  /// Products evaluated at one w: Q, Q' and Q_n, Q_n' for every scheduled n.
  class AtW {
   public:
    const QFactors<Real>& factors() const { return q_; }
    const Complex<Real>& w() const { return q_.w(); }

   private:
    friend class CSFunction;
    QFactors<Real> q_;
    std::vector<const Jet<Real>*> qn_;
  };

  CSFunction(Schedule schedule, TruncationPolicy policy = {}, unsigned precision_bits = 53)
      : schedule_(std::move(schedule)), policy_(policy), bits_(precision_bits) {
    policy_.validate();
    if constexpr (std::is_same_v<Real, double>) {
      for (int n : schedule_.indices())
        if (schedule_.exponent(n) > kDoubleMaxExponent)
          throw PrecisionOverflow(n, schedule_.exponent(n), schedule_.exponent(n) + 64);
    }
    for (int n : schedule_.indices()) roots_.push_back(lattice_roots<Real>(schedule_.period(n), schedule_.rate(n)));
  }

  const Schedule& schedule() const { return schedule_; }
  const TruncationPolicy& policy() const { return policy_; }
  unsigned precision_bits() const { return bits_; }

  AtW at(const Complex<Real>& w) const {
    AtW a;
    a.q_ = QFactors<Real>(w, policy_, schedule_.indices());
    for (int n : schedule_.indices()) a.qn_.push_back(a.q_.find_excluding(n));
    return a;
  }

  GValue<Real> eval(const AtW& a, const Complex<Real>& z) const {
    GValue<Real> out;
    Scaled<Real> g1;
    double mag = 0;
    for (std::size_t i = 0; i < roots_.size(); ++i) {
      const int n = schedule_.start_index() + static_cast<int>(i);
      const Scaled<Real> term = coef(n) * a.qn_[i]->value * root_value(i, z);
      g1 += term;
      mag += std::exp2(term.log2_abs());
    }
    out.g1 = g1.value();
    out.g2 = a.q_.q().value.value();
    out.tail_bound = a.q_.tail_rel() * (mag + std::exp2(a.q_.q().value.log2_abs()));
    return out;
  }

  GValue<Real> eval(const Complex<Real>& z, const Complex<Real>& w) const { return eval(at(w), z); }

  /// g1 in scaled form; never overflows.
  Scaled<Real> g1_scaled(const AtW& a, const Complex<Real>& z) const {
    Scaled<Real> g1;
    for (std::size_t i = 0; i < roots_.size(); ++i)
      g1 += coef(schedule_.start_index() + static_cast<int>(i)) * a.qn_[i]->value * root_value(i, z);
    return g1;
  }

  /// ln max(|g1|, |g2|).
  double log_norm(const AtW& a, const Complex<Real>& z) const {
    return std::max(g1_scaled(a, z).log_abs(), a.q_.q().value.log_abs());
  }

  GJacobian<Real> jacobian(const AtW& a, const Complex<Real>& z) const {
    GJacobian<Real> d;
    for (std::size_t i = 0; i < roots_.size(); ++i) {
      const int n = schedule_.start_index() + static_cast<int>(i);
      const Jet<Real> p = root_product(roots_[i], z);
      const Jet<Real>& qn = *a.qn_[i];
      d.d1dz += coef(n) * qn.value * p.deriv;
      d.d1dw += coef(n) * qn.deriv * p.value;
    }
    d.d2dw = a.q_.q().deriv;
    return d;
  }

  GJacobian<Real> jacobian(const Complex<Real>& z, const Complex<Real>& w) const { return jacobian(at(w), z); }

  /// Lattice root e^{2 pi i l/p_n}/j in the evaluator's own precision; bit-identical to the P_n root.
  const Complex<Real>& lattice_z(int n, int j, int ell) const {
    return roots_.at(static_cast<std::size_t>(n - schedule_.start_index()))
        .at(static_cast<std::size_t>((j - 1) * schedule_.period(n) + ell));
  }

  /// 2^-l_n.
  Scaled<Real> coef(int n) const {
    return Scaled<Real>(Complex<Real>(Real(1), Real(0)), -static_cast<std::int64_t>(schedule_.exponent(n)));
  }

  /// Zero lattice of the normalised schedule, ordered by (n, j, l).
  std::vector<LatticePoint> zero_lattice() const { return enumerate(schedule_.rates()); }
  /// The same enumeration on the rates as given, before normalisation.
  std::vector<LatticePoint> zero_lattice_original() const { return enumerate(schedule_.original_rates()); }

 private:
  Scaled<Real> root_value(std::size_t i, const Complex<Real>& z) const {
    Scaled<Real> acc = Scaled<Real>::one();
    for (const auto& r : roots_[i]) acc *= z - r;
    return acc;
  }

  std::vector<LatticePoint> enumerate(const std::vector<int>& rates) const {
    std::vector<LatticePoint> out;
    for (int n : schedule_.indices()) {
      const int p = schedule_.period(n);
      const int m = rates.at(static_cast<std::size_t>(n - schedule_.start_index()));
      for (int j = 1; j <= m; ++j)
        for (int l = 0; l < p; ++l) out.push_back(make_lattice_point(n, p, j, l));
    }
    return out;
  }

  Schedule schedule_;
  TruncationPolicy policy_;
  unsigned bits_;
  std::vector<std::vector<Complex<Real>>> roots_;
};

template <class Real = double>
CSFunction<Real> build_cs(const Schedule& s, const TruncationPolicy& policy = {}, unsigned precision_bits = 53) {
  return CSFunction<Real>(s, policy, precision_bits);
}

/// Residual of one zero-lattice point: max(|g1|, |g2|) against the tail bound.
struct LatticeCheck {
  LatticePoint point;
  double abs_g1 = 0;
  double abs_g2 = 0;
  double tail_bound = 0;
  bool ok() const { return abs_g1 <= tail_bound && abs_g2 <= tail_bound; }
};

template <class Real>
std::vector<LatticeCheck> check_zero_lattice(const CSFunction<Real>& cs) {
  std::vector<LatticeCheck> out;
  for (int n : cs.schedule().indices()) {
    const auto a = cs.at(Complex<Real>(pow2<Real>(n), Real(0)));
    for (int j = 1; j <= cs.schedule().rate(n); ++j)
      for (int l = 0; l < cs.schedule().period(n); ++l) {
        const auto g = cs.eval(a, cs.lattice_z(n, j, l));
        using std::abs;
        out.push_back({make_lattice_point(n, cs.schedule().period(n), j, l), to_double(Real(abs(g.g1))),
                       to_double(Real(abs(g.g2))), g.tail_bound});
      }
  }
  return out;
}

}  // namespace ordzero

#pragma once

// Dispatchers: entire functions D_m with D_m(2^n) = M for n = m and 0 at every
// other node 2^n. The explicit family is
//
//   D_m(w) = M * Q_m(w) / Q_m(2^m) = M * prod_{j != m} (2^j - w) / (2^j - 2^m),
//
// evaluated factor by factor so that every ratio is exactly 1 at w = 2^m.
// Its growth constant depends on m; it does not reproduce a constant that is
// uniform over the node set.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "ordzero/dbar.hpp"
#include "ordzero/errors.hpp"
#include "ordzero/growth.hpp"
#include "ordzero/numeric.hpp"
#include "ordzero/products.hpp"
#include "ordzero/scaled.hpp"
#include "ordzero/schedule.hpp"

namespace ordzero {

enum class DispatcherKind { explicit_product, dbar_numeric };

inline const char* to_string(DispatcherKind k) {
  return k == DispatcherKind::explicit_product ? "explicit-product" : "dbar-numeric";
}

struct DispatcherGrowth {
  std::vector<ModulusSample> samples;  ///< ln max_{|w|=r} |D_m|
  GrowthFit fit;
  double max_log_over_log2 = 0;  ///< max of ln M_D(r) / ln^2 r over 2^4 <= r <= 2^12
  bool constant_depends_on_m = true;
};

template <class Real = double>
class Dispatcher {
 public:
  Dispatcher(int m, double M, TruncationPolicy policy = {}) : m_(m), M_(M), policy_(policy) {
    if (m < 1) throw ScheduleError("dispatcher index must be >= 1");
    policy_.validate();
  }

  int m() const { return m_; }
  double M() const { return M_; }
  DispatcherKind kind() const { return DispatcherKind::explicit_product; }
  const DispatcherGrowth& growth() const { return growth_; }
  void set_growth(DispatcherGrowth g) { growth_ = std::move(g); }

  /// D_m(w) / scale and its w-derivative. Passing scale = M returns the
  /// normalised ratio Q_m(w)/Q_m(2^m), which is exactly 1 at w = 2^m.
  Jet<Real> jet(const Complex<Real>& w, double scale = 1.0) const {
    using std::abs;
    const double aw = std::max(to_double(Real(abs(w))), std::ldexp(1.0, m_));
    const int terms = std::max(truncation_terms(aw, policy_), m_ + 1);
    const Real node = pow2<Real>(m_);
    Jet<Real> jet;
    for (int j = 1; j <= terms; ++j) {
      if (j == m_) continue;
      const Real pj = pow2<Real>(j);
      const Real den = pj - node;
      jet.mul(Complex<Real>(pj - w.real(), -w.imag()) / den, Complex<Real>(Real(-1) / den, Real(0)));
    }
    const Real c = Real(M_) / Real(scale);
    if (c != Real(1)) {
      jet.value *= Complex<Real>(c, Real(0));
      jet.deriv *= Complex<Real>(c, Real(0));
    }
    return jet;
  }

  Complex<Real> operator()(const Complex<Real>& w) const { return jet(w).value.value(); }
  Complex<Real> deriv(const Complex<Real>& w) const { return jet(w).deriv.value(); }

 private:
  int m_;
  double M_;
  TruncationPolicy policy_;
  DispatcherGrowth growth_;
};

/// Samples ln max |D| on circles |w| = r, r = 2, 4, ..., 2^12.
template <class Real>
DispatcherGrowth measure_growth(const Dispatcher<Real>& d, int angles = 256) {
  DispatcherGrowth g;
  for (int k = 1; k <= 12; ++k) {
    ModulusSample s;
    s.r = std::ldexp(1.0, k);
    for (int a = 0; a < angles; ++a) {
      const Complex<Real> w = Complex<Real>(Real(s.r), Real(0)) * unit_root<Real>(a, angles);
      const double v = d.jet(w).value.log_abs();
      if (v > s.log_max) {
        s.log_max = v;
        s.w = to_double(w);
      }
    }
    g.samples.push_back(s);
    if (k >= 4) g.max_log_over_log2 = std::max(g.max_log_over_log2, s.log_max / std::pow(std::log(s.r), 2));
  }
  g.fit = fit_growth(g.samples);
  return g;
}

template <class Real = double>
Dispatcher<Real> build_explicit_dispatcher(int m, double M, const TruncationPolicy& policy = {},
                                           bool with_growth = true) {
  Dispatcher<Real> d(m, M, policy);
  if (with_growth) d.set_growth(measure_growth(d));
  return d;
}

/// One dispatcher D_m with M = m^2 per scheduled level.
template <class Real = double>
std::vector<Dispatcher<Real>> build_dispatchers(const Schedule& s, const TruncationPolicy& policy = {},
                                                bool with_growth = false) {
  std::vector<Dispatcher<Real>> out;
  for (int n : s.indices()) out.push_back(build_explicit_dispatcher<Real>(n, double(n) * n, policy, with_growth));
  return out;
}

/// sum_m D_m(w) / m^2 over the given dispatchers, with its derivative.
template <class Real>
Jet<Real> dispatcher_sum_jet(const std::vector<Dispatcher<Real>>& ds, const Complex<Real>& w) {
  Jet<Real> sum;
  sum.value = Scaled<Real>::zero();
  for (const auto& d : ds) {
    const auto j = d.jet(w, double(d.m()) * d.m());
    sum.value += j.value;
    sum.deriv += j.deriv;
  }
  return sum;
}

template <class Real>
Complex<Real> dispatcher_sum(const std::vector<Dispatcher<Real>>& ds, const Complex<Real>& w) {
  return dispatcher_sum_jet(ds, w).value.value();
}

struct NodeComparison {
  int k = 0;
  double target = 0;
  cplx explicit_value, numeric_value;
  double deviation = 0;  ///< |explicit - numeric|
};

/// Explicit dispatchers against the dbar realisation of the same node data.
struct DbarValidation {
  std::set<int> J;
  double M = 0;
  std::vector<NodeComparison> nodes;
  double max_node_deviation = 0;
  double max_numeric_error = 0;  ///< max |f(2^k) - target|
  std::vector<ModulusSample> explicit_samples, numeric_samples;
  GrowthFit explicit_fit, numeric_fit;
  double residual = 0;
  HormanderCertificate hormander;
  int iterations = 0;
};

/// Compares sum_{m in J} D_m (explicit, node value M) with the dbar solution f for
/// model data M 1_{D_m}, at the nodes 2^k of the dbar range and on circles about 0.
inline DbarValidation validate_against_dbar(std::set<int> J, double M, const DbarConfig& cfg,
                                            const TruncationPolicy& policy = {}) {
  for (int m : J)
    if (m < cfg.k_min || m > cfg.k_max) throw Error("dispatcher index " + std::to_string(m) + " outside dbar range");
  DbarValidation v;
  v.J = J;
  v.M = M;
  std::vector<Dispatcher<double>> ds;
  for (int m : J) ds.push_back(build_explicit_dispatcher<double>(m, M, policy, false));
  auto explicit_at = [&](cplx w) {
    cplx s = 0;
    for (const auto& d : ds) s += d(w);
    return s;
  };
  const auto run = run_dbar(cfg, J, M);
  v.residual = run.solve.residual;
  v.hormander = run.hormander;
  v.iterations = run.solve.iterations;
  for (const auto& n : run.solution.nodes) {
    NodeComparison c;
    c.k = n.k;
    c.target = n.target;
    c.numeric_value = n.value;
    c.explicit_value = explicit_at(cplx(std::ldexp(1.0, n.k), 0));
    c.deviation = std::abs(c.explicit_value - c.numeric_value);
    v.max_node_deviation = std::max(v.max_node_deviation, c.deviation);
    v.max_numeric_error = std::max(v.max_numeric_error, n.error);
    v.nodes.push_back(c);
  }
  v.numeric_samples = run.growth.samples;
  v.numeric_fit = run.growth.fit;
  for (const auto& s : run.growth.samples) {
    ModulusSample e;
    e.r = s.r;
    for (int a = 0; a < 1024; ++a) {
      const cplx w = s.r * unit_root<double>(a, 1024);
      const double l = std::log(std::abs(explicit_at(w)));
      if (l > e.log_max) {
        e.log_max = l;
        e.w = w;
      }
    }
    v.explicit_samples.push_back(e);
  }
  if (v.explicit_samples.size() >= 2) v.explicit_fit = fit_growth(v.explicit_samples);
  return v;
}

inline DbarValidation validate_against_dbar(int m, double M, const DbarConfig& cfg,
                                            const TruncationPolicy& policy = {}) {
  return validate_against_dbar(std::set<int>{m}, M, cfg, policy);
}

}  // namespace ordzero

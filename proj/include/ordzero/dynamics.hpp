#pragma once

// The map F = G + (sum_m D_m(w)/m^2 Theta_{p_m}(z), w), its iterates, and the
// verification of lattice points as isolated primitive periodic points.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordzero/bigfloat.hpp"
#include "ordzero/cs_builder.hpp"
#include "ordzero/dispatcher.hpp"
#include "ordzero/errors.hpp"
#include "ordzero/numeric.hpp"
#include "ordzero/products.hpp"
#include "ordzero/scaled.hpp"

namespace ordzero {

template <class Real>
struct Point2 {
  Complex<Real> z, w;
};

template <class Real>
struct Jac2 {
  Complex<Real> a11, a12, a21, a22;

  Jac2 operator*(const Jac2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22, a21 * o.a11 + a22 * o.a21,
            a21 * o.a12 + a22 * o.a22};
  }
  static Jac2 identity() {
    const Complex<Real> one(Real(1), Real(0)), zero(Real(0), Real(0));
    return {one, zero, zero, one};
  }
};

template <class Real>
Real distance(const Point2<Real>& a, const Point2<Real>& b) {
  return norm2(a.z - b.z, a.w - b.w);
}

/// How the rotation part of the map was assembled; enough to rebuild it in
/// another precision.
struct MapSpec {
  Schedule schedule{{}, {}, 2};
  std::vector<std::pair<int, double>> dispatch;  ///< (m, M) per dispatcher
  int single_period = 0;                         ///< > 0: G + (Theta_p z, w)
};

template <class Real = double>
class MapF {
 public:
  using Pt = Point2<Real>;
  using J = Jac2<Real>;

  MapF(CSFunction<Real> cs, std::vector<Dispatcher<Real>> ds)
      : cs_(std::move(cs)), ds_(std::move(ds)) {
    spec_.schedule = cs_.schedule();
    for (const auto& d : ds_) {
      spec_.dispatch.emplace_back(d.m(), d.M());
      rot_.push_back(unit_root<Real>(1, period_for(d.m())));
    }
  }

  MapF(CSFunction<Real> cs, int period) : cs_(std::move(cs)) {
    if (period < 1) throw ScheduleError("single period must be >= 1");
    spec_.schedule = cs_.schedule();
    spec_.single_period = period;
    rot_.push_back(unit_root<Real>(1, period));
  }

  const CSFunction<Real>& cs() const { return cs_; }
  const MapSpec& spec() const { return spec_; }
  const std::vector<Dispatcher<Real>>& dispatchers() const { return ds_; }
  bool single_period() const { return spec_.single_period > 0; }

  /// Period of the rotation that acts on lattice level n.
  int period_at(int n) const { return single_period() ? spec_.single_period : cs_.schedule().period(n); }

  /// Rotation coefficient c(w) = sum_m D_m(w)/m^2 e^{2 pi i/p_m} and c'(w).
  struct Rotation {
    Complex<Real> c, dc;
  };
  Rotation rotation(const Complex<Real>& w) const {
    if (single_period()) return {rot_[0], Complex<Real>(Real(0), Real(0))};
    Scaled<Real> c, dc;
    for (std::size_t i = 0; i < ds_.size(); ++i) {
      const auto& d = ds_[i];
      const auto jet = d.jet(w, double(d.m()) * d.m());
      c += jet.value * rot_[i];
      dc += jet.deriv * rot_[i];
    }
    return {c.value(), dc.value()};
  }

  /// Evaluation with the w-dependent parts cached for the last w seen.
  /// Not shareable between threads; create one per thread.
  class Cursor {
   public:
    explicit Cursor(const MapF& f) : f_(&f) {}

    Pt operator()(const Pt& x) { return eval(x, nullptr); }
    Pt eval(const Pt& x, J* jac) {
      prepare(x.w);
      const auto g = f_->cs_.eval(*at_, x.z);
      Pt out{g.g1 + rot_.c * x.z, g.g2 + x.w};
      if (jac) {
        const auto d = f_->cs_.jacobian(*at_, x.z);
        jac->a11 = d.d1dz.value() + rot_.c;
        jac->a12 = d.d1dw.value() + rot_.dc * x.z;
        jac->a21 = Complex<Real>(Real(0), Real(0));
        jac->a22 = d.d2dw.value() + Complex<Real>(Real(1), Real(0));
      }
      return out;
    }

   private:
    void prepare(const Complex<Real>& w) {
      if (at_ && at_->w() == w) return;
      at_ = f_->cs_.at(w);
      rot_ = f_->rotation(w);
    }
    const MapF* f_;
    std::optional<typename CSFunction<Real>::AtW> at_;
    Rotation rot_;
  };

  Pt operator()(const Pt& x) const { return Cursor(*this)(x); }

  /// Growth sampling: the w-dependent parts of F.
  struct AtW {
    typename CSFunction<Real>::AtW cs;
    Scaled<Real> c;   ///< rotation coefficient
    Scaled<Real> f2;  ///< g2 + w
  };
  AtW at(const Complex<Real>& w) const {
    AtW a{cs_.at(w), Scaled<Real>(), Scaled<Real>()};
    if (single_period()) {
      a.c = Scaled<Real>(rot_[0]);
    } else {
      for (std::size_t i = 0; i < ds_.size(); ++i)
        a.c += ds_[i].jet(w, double(ds_[i].m()) * ds_[i].m()).value * rot_[i];
    }
    a.f2 = a.cs.factors().q().value + Scaled<Real>(w);
    return a;
  }
  /// ln max(|f1|, |f2|), overflow-free.
  double log_norm(const AtW& a, const Complex<Real>& z) const {
    return std::max((cs_.g1_scaled(a.cs, z) + a.c * z).log_abs(), a.f2.log_abs());
  }

  /// Same map in another precision; policy applies to the rebuilt products.
  template <class R2>
  MapF<R2> rebind(const TruncationPolicy& policy, unsigned bits) const {
    CSFunction<R2> cs(spec_.schedule, policy, bits);
    if (single_period()) return MapF<R2>(std::move(cs), spec_.single_period);
    std::vector<Dispatcher<R2>> ds;
    for (auto [m, M] : spec_.dispatch) ds.emplace_back(m, M, policy);
    return MapF<R2>(std::move(cs), std::move(ds));
  }

 private:
  int period_for(int m) const { return cs_.schedule().contains(m) ? cs_.schedule().period(m) : 1; }

  CSFunction<Real> cs_;
  std::vector<Dispatcher<Real>> ds_;
  std::vector<Complex<Real>> rot_;
  MapSpec spec_;
};

template <class Real>
MapF<Real> assemble_F(const CSFunction<Real>& cs, const std::vector<Dispatcher<Real>>& ds) {
  for (const auto& d : ds)
    if (!cs.schedule().contains(d.m())) throw ScheduleError("dispatcher m=" + std::to_string(d.m()) + " not scheduled");
  return MapF<Real>(cs, ds);
}

/// F with one dispatcher D_n (M = n^2) per scheduled level.
template <class Real = double>
MapF<Real> assemble_F(const CSFunction<Real>& cs) {
  return MapF<Real>(cs, build_dispatchers<Real>(cs.schedule(), cs.policy()));
}

template <class Real>
MapF<Real> assemble_single_period(const CSFunction<Real>& cs, int p) {
  return MapF<Real>(cs, p);
}

template <class Real>
struct IterateResult {
  Point2<Real> point;
  double log2_conditioning = 0;  ///< sum of log2 of Jacobian Frobenius norms along the orbit
};

template <class Real>
IterateResult<Real> iterate(const MapF<Real>& f, Point2<Real> x, int k) {
  if (k < 0) throw Error("iterate needs k >= 0");
  typename MapF<Real>::Cursor cur(f);
  IterateResult<Real> out{x, 0.0};
  for (int i = 0; i < k; ++i) {
    Jac2<Real> j;
    out.point = cur.eval(out.point, &j);
    using std::isfinite;
    if (!isfinite(to_double(Real(abs(out.point.z)))) || !isfinite(to_double(Real(abs(out.point.w)))))
      throw Overflow("orbit left the representable range at step " + std::to_string(i + 1));
    const double fro = std::sqrt(std::norm(to_double(j.a11)) + std::norm(to_double(j.a12)) +
                                 std::norm(to_double(j.a21)) + std::norm(to_double(j.a22)));
    out.log2_conditioning += std::log2(fro);
  }
  return out;
}

/// prod_{k=0}^{p-1} (1 + a e^{2 pi i k/p}), which equals 1 - (-a)^p.
template <class Real>
Complex<Real> prod_root_identity(const Complex<Real>& a, int p) {
  if (p < 1) throw Error("prod_root_identity needs p >= 1");
  Complex<Real> acc(Real(1), Real(0));
  for (int k = 0; k < p; ++k) acc *= Complex<Real>(Real(1), Real(0)) + a * unit_root<Real>(k, p);
  return acc;
}

struct RootIdentity {
  std::complex<double> value;
  std::complex<double> minus_one;  ///< value - 1, from the extended-precision product
  double log2_abs_minus_one = 0;
};

/// prod_root_identity in a precision wide enough to resolve value - 1 ~ |a|^p.
inline RootIdentity prod_root_identity_checked(std::complex<double> a, int p) {
  const double la = a == 0.0 ? 0.0 : std::max(0.0, -std::log2(std::abs(a)));
  const unsigned bits = 128 + static_cast<unsigned>(std::ceil(p * la));
  ScopedPrecision prec(bits);
  const Complex<BigReal> ab(BigReal(a.real()), BigReal(a.imag()));
  const auto v = prod_root_identity(ab, p);
  const auto d = v - Complex<BigReal>(BigReal(1), BigReal(0));
  RootIdentity r;
  r.value = to_double(v);
  r.minus_one = to_double(d);
  r.log2_abs_minus_one = d == Complex<BigReal>(0, 0) ? -std::numeric_limits<double>::infinity()
                                                      : static_cast<double>(log2(abs(d)));
  return r;
}

struct PPPOptions {
  double orbit_tol = 1e-10;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  double newton_radius = 1e-8;  ///< refined point must stay this close to the lattice point
  double margin_floor = 1e-8;
  bool finite_difference = true;
  double log_agreement = 1e-3;  ///< relative, on log2 |det|
  unsigned min_fd_bits = 0;     ///< floor for the planned MPFR precision
};

enum class PPPFailure { none, orbit_residual, primitivity, degenerate_jacobian };

struct PPPRecord {
  LatticePoint point;
  int period = 0;
  double orbit_residual = 0;
  std::vector<double> primitivity_margins;  ///< k = 1..p-1
  std::vector<double> expected_margins;     ///< 2 |z| |sin(pi k/p)|
  double log2_abs_a = 0;                    ///< log2 |d g1/dz| at (1/j, 2^n)
  double jacobian_log_margin = 0;           ///< closed form log2 |det(dF^p - I)|
  double jacobian_log_margin_fd = std::numeric_limits<double>::quiet_NaN();
  unsigned fd_bits = 0;
  bool newton_refined = false;
  int newton_steps = 0;
  std::complex<double> z, w;  ///< verified location (after refinement)
  PPPFailure failure_kind = PPPFailure::none;
  std::string failure;  ///< empty on success

  bool ok() const { return failure_kind == PPPFailure::none; }
  double norm() const { return std::sqrt(std::norm(z) + std::norm(w)); }
};

namespace detail {

template <class Real>
bool solve2(const Jac2<Real>& m, const Complex<Real>& b1, const Complex<Real>& b2, Complex<Real>& x1,
            Complex<Real>& x2) {
  const Complex<Real> det = m.a11 * m.a22 - m.a12 * m.a21;
  if (det == Complex<Real>(Real(0), Real(0))) return false;
  x1 = (b1 * m.a22 - m.a12 * b2) / det;
  x2 = (m.a11 * b2 - m.a21 * b1) / det;
  return true;
}

inline std::string label(const LatticePoint& p) {
  return "point (n=" + std::to_string(p.n) + ", j=" + std::to_string(p.j) + ", l=" + std::to_string(p.ell) + ")";
}

}  // namespace detail

/// Newton on H(x) = F^p(x) - x, keeping only steps that decrease |H|.
template <class Real>
struct NewtonResult {
  Point2<Real> x;
  Real residual;
  int steps = 0;
  bool moved = false;
};

template <class Real>
NewtonResult<Real> newton_periodic(const MapF<Real>& f, Point2<Real> x, int p, const PPPOptions& opt) {
  typename MapF<Real>::Cursor cur(f);
  auto orbit = [&](const Point2<Real>& y, Jac2<Real>* jac) {
    Point2<Real> c = y;
    Jac2<Real> acc = Jac2<Real>::identity();
    for (int k = 0; k < p; ++k) {
      Jac2<Real> j;
      c = cur.eval(c, jac ? &j : nullptr);
      if (jac) acc = j * acc;
    }
    if (jac) *jac = acc;
    return c;
  };
  NewtonResult<Real> out{x, Real(0), 0, false};
  Jac2<Real> jac;
  Point2<Real> fx = orbit(x, &jac);
  out.residual = distance(fx, x);
  const Point2<Real> start = x;
  while (out.residual > Real(opt.newton_tol) && out.steps < opt.newton_max_iter) {
    Jac2<Real> h = jac;
    h.a11 -= Real(1);
    h.a22 -= Real(1);
    Complex<Real> dz, dw;
    if (!detail::solve2(h, x.z - fx.z, x.w - fx.w, dz, dw)) break;
    const Point2<Real> y{x.z + dz, x.w + dw};
    if (distance(y, start) > Real(opt.newton_radius)) break;
    Jac2<Real> jy;
    const Point2<Real> fy = orbit(y, &jy);
    const Real ry = distance(fy, y);
    if (!(ry < out.residual)) break;
    x = y;
    fx = fy;
    jac = jy;
    out.residual = ry;
    out.moved = true;
    ++out.steps;
  }
  out.x = x;
  return out;
}

/// Closed-form log2 |det(dF^p - I)| = p log2|a| + log2|(1 + Q'(2^n))^p - 1|.
inline double closed_form_log_margin(double log2_abs_a, std::complex<double> q_prime, int p) {
  const std::complex<double> second = std::pow(1.0 + q_prime, p) - 1.0;
  return p * log2_abs_a + std::log2(std::abs(second));
}

/// Precision and step for the z-column difference quotient: the entry is
/// ~2^-E with E = p A, the third derivative ~2^-A.
struct FdPlan {
  unsigned bits;
  int step_exp;  ///< h = 2^-step_exp
};
inline FdPlan plan_fd(double log2_abs_a, int p) {
  const double A = std::max(0.0, -log2_abs_a);
  const double E = p * A;
  const int t = static_cast<int>(std::ceil(((p - 1) * A + 48) / 2));
  return {static_cast<unsigned>(std::ceil(E + t + 64)), t};
}

/// log2 |det| of the difference-quotient Jacobian of F^p - I at a lattice
/// point. The z-column runs in MPFR (w stays exactly 2^n along it); the
/// w-column needs only ordinary precision because d(F^p)_2/dz = 0 removes the
/// off-diagonal product from the determinant.
template <class Real>
double fd_log_margin(const MapF<Real>& fd, typename MapF<Real>::Cursor& cur, const MapF<double>& fdouble,
                     const LatticePoint& pt, int p, const FdPlan& plan) {
  const auto& zl = fd.cs().lattice_z(pt.n, pt.j, pt.ell);
  const Complex<Real> w(pow2<Real>(pt.n), Real(0));
  const Real h = pow2<Real>(-plan.step_exp);
  auto orbit = [&](Point2<Real> x) {
    for (int k = 0; k < p; ++k) x = cur(x);
    return x;
  };
  const auto plus = orbit({zl + h, w});
  const auto minus = orbit({zl - h, w});
  const Complex<Real> d11 = (plus.z - minus.z) / (Real(2) * h) - Real(1);
  const Complex<Real> d21 = (plus.w - minus.w) / (Real(2) * h);

  const double hw = 1e-6;
  typename MapF<double>::Cursor c2(fdouble);
  auto orbit_d = [&](Point2<double> x) {
    for (int k = 0; k < p; ++k) x = c2(x);
    return x;
  };
  const std::complex<double> wd(std::ldexp(1.0, pt.n), 0);
  const auto wp = orbit_d({pt.z, wd + hw});
  const auto wm = orbit_d({pt.z, wd - hw});
  const std::complex<double> d12 = (wp.z - wm.z) / (2 * hw);
  const std::complex<double> d22 = (wp.w - wm.w) / (2 * hw) - 1.0;

  // det = d11 d22 - d12 d21, with d21 identically zero here.
  const Scaled<Real> t1 = Scaled<Real>(d11) * Scaled<Real>(Complex<Real>(Real(d22.real()), Real(d22.imag())));
  const Scaled<Real> t2 = Scaled<Real>(Complex<Real>(Real(d12.real()), Real(d12.imag()))) * Scaled<Real>(d21);
  return (t1 - t2).log2_abs();
}

/// Checks every lattice point of level n. Records carry a failure message
/// instead of throwing; see verify_ppp for the throwing form.
inline std::vector<PPPRecord> check_level(const MapF<double>& f, int n, const PPPOptions& opt = {}) {
  const auto& cs = f.cs();
  const auto& s = cs.schedule();
  const int p = f.period_at(n);
  const std::complex<double> w(std::ldexp(1.0, n), 0);
  const auto at = cs.at(w);
  const std::complex<double> qp = at.factors().q().deriv.value();
  const bool closed_form = s.period(n) % p == 0;

  std::vector<PPPRecord> out;
  for (int j = 1; j <= s.rate(n); ++j) {
    const double log2_a = cs.jacobian(at, cs.lattice_z(n, j, 0)).d1dz.log2_abs();
    FdPlan plan = plan_fd(log2_a, p);
    plan.bits = std::max(plan.bits, opt.min_fd_bits);
    std::optional<ScopedPrecision> prec;
    std::optional<MapF<BigReal>> big;
    std::optional<MapF<BigReal>::Cursor> big_cur;
    if (opt.finite_difference) {
      prec.emplace(plan.bits);
      big.emplace(f.template rebind<BigReal>(TruncationPolicy::for_bits(plan.bits), plan.bits));
      big_cur.emplace(*big);
    }
    for (int l = 0; l < s.period(n); ++l) {
      PPPRecord r;
      r.point = make_lattice_point(n, s.period(n), j, l);
      r.period = p;
      r.log2_abs_a = log2_a;
      const Point2<double> x0{cs.lattice_z(n, j, l), w};

      const auto nr = newton_periodic(f, x0, p, opt);
      r.orbit_residual = nr.residual;
      r.newton_refined = nr.moved;
      r.newton_steps = nr.steps;
      r.z = nr.x.z;
      r.w = nr.x.w;

      typename MapF<double>::Cursor cur(f);
      Point2<double> x = nr.x;
      for (int k = 1; k < p; ++k) {
        x = cur(x);
        r.primitivity_margins.push_back(distance(x, nr.x));
        r.expected_margins.push_back(2 * std::abs(nr.x.z) * std::abs(std::sin(pi<double>() * k / p)));
      }

      r.jacobian_log_margin = closed_form ? closed_form_log_margin(log2_a, qp, p)
                                          : std::numeric_limits<double>::quiet_NaN();
      if (big) {
        r.fd_bits = plan.bits;
        r.jacobian_log_margin_fd = fd_log_margin(*big, *big_cur, f, r.point, p, plan);
      }

      if (!(r.orbit_residual <= opt.orbit_tol)) {
        r.failure_kind = PPPFailure::orbit_residual;
        r.failure = "orbit residual " + std::to_string(r.orbit_residual) + " above tolerance at " +
                    detail::label(r.point);
      } else if (auto it = std::find_if(r.primitivity_margins.begin(), r.primitivity_margins.end(),
                                        [&](double m) { return !(m >= opt.margin_floor); });
                 it != r.primitivity_margins.end()) {
        r.failure_kind = PPPFailure::primitivity;
        r.failure = "F^" + std::to_string(1 + (it - r.primitivity_margins.begin())) + " returns to " +
                    detail::label(r.point);
      } else {
        const double lm = closed_form ? r.jacobian_log_margin : r.jacobian_log_margin_fd;
        const bool agree = !closed_form || !big ||
                           std::abs(r.jacobian_log_margin_fd - r.jacobian_log_margin) <=
                               opt.log_agreement * std::abs(r.jacobian_log_margin);
        if (!std::isfinite(lm) || !agree) {
          r.failure_kind = PPPFailure::degenerate_jacobian;
          r.failure = "degenerate Jacobian at " + detail::label(r.point) + " (closed form " +
                      std::to_string(r.jacobian_log_margin) + ", difference quotient " +
                      std::to_string(r.jacobian_log_margin_fd) + ")";
        }
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

/// Throwing form: the first failing point raises the matching error.
inline std::vector<PPPRecord> verify_ppp(const MapF<double>& f, int n, const PPPOptions& opt = {}) {
  auto recs = check_level(f, n, opt);
  for (const auto& r : recs) {
    switch (r.failure_kind) {
      case PPPFailure::none:
        break;
      case PPPFailure::orbit_residual:
        throw OrbitResidualTooLarge(r.failure);
      case PPPFailure::primitivity:
        throw PrimitivityFailure(r.failure);
      case PPPFailure::degenerate_jacobian:
        throw DegenerateJacobian(r.failure);
    }
  }
  return recs;
}

/// Verified p-periodic records inside the closed ball of radius r.
inline int count_ppp(const std::vector<PPPRecord>& recs, int p, double r) {
  return static_cast<int>(std::count_if(recs.begin(), recs.end(), [&](const PPPRecord& x) {
    return x.ok() && x.period == p && x.norm() <= r;
  }));
}

struct LevelCount {
  int n = 0;
  int period = 0;
  int claimed = 0;          ///< m_n as given
  int normalized_rate = 0;  ///< m_n after degree normalisation
  int lattice_points = 0;
  int verified = 0;
  int count_at_radius = 0;   ///< nu_p(F, 2^n + 1)
  int count_at_literal = 0;  ///< nu_p(F, 2^n)
  double check_radius = 0;
  bool second_factor_nonzero = false;  ///< (1 + Q'(2^n))^p != 1
  std::vector<PPPRecord> records;

  bool ok() const { return count_at_radius >= claimed && verified == lattice_points; }
};

struct CountReport {
  std::vector<LevelCount> levels;
  bool ok() const {
    return std::all_of(levels.begin(), levels.end(), [](const LevelCount& l) { return l.ok(); });
  }
  int total_verified() const {
    int t = 0;
    for (const auto& l : levels) t += l.verified;
    return t;
  }
};

inline CountReport count_report(const MapF<double>& f, const PPPOptions& opt = {}) {
  CountReport rep;
  const auto& s = f.cs().schedule();
  for (int n : s.indices()) {
    LevelCount lc;
    lc.n = n;
    lc.period = f.period_at(n);
    lc.claimed = s.original_rate(n);
    lc.normalized_rate = s.rate(n);
    lc.records = check_level(f, n, opt);
    lc.lattice_points = static_cast<int>(lc.records.size());
    lc.verified = static_cast<int>(std::count_if(lc.records.begin(), lc.records.end(),
                                                 [](const PPPRecord& r) { return r.ok(); }));
    lc.check_radius = std::ldexp(1.0, n) + 1;
    lc.count_at_radius = count_ppp(lc.records, lc.period, lc.check_radius);
    lc.count_at_literal = count_ppp(lc.records, lc.period, std::ldexp(1.0, n));
    const auto qp = eval_Q_deriv<double>({std::ldexp(1.0, n), 0}, f.cs().policy());
    lc.second_factor_nonzero = std::abs(std::pow(1.0 + qp, lc.period) - 1.0) > 0;
    rep.levels.push_back(std::move(lc));
  }
  return rep;
}

}  // namespace ordzero

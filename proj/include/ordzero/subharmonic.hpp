#pragma once

// Base potential u0, the puncture construction
//
//   v(z) = (P_D u_k)((z - z_k)/r_k) + A_k log(|z - z_k|/r_k)   on B_k = B(z_k, r_k)
//   v(z) = u0(z)                                               elsewhere
//
// and discrete checks of subharmonicity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "ordzero/errors.hpp"
#include "ordzero/numeric.hpp"

namespace ordzero {

using cplx = std::complex<double>;

/// Stand-in for -infinity at puncture centres; e^{-v} saturates instead of
/// producing NaN downstream.
inline constexpr double kNegInfSentinel = -1e300;

namespace detail {

/// Composite Gauss-Legendre rule on [0, 1]: `panels` panels of 32 points.
struct GaussRule {
  std::vector<double> x, w;
};
inline GaussRule gauss_unit(int panels) {
  using G = boost::math::quadrature::gauss<double, 32>;
  const auto& a = G::abscissa();
  const auto& wt = G::weights();
  GaussRule r;
  for (int p = 0; p < panels; ++p) {
    const double lo = double(p) / panels, half = 0.5 / panels, mid = lo + half;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) {
        r.x.push_back(mid);
        r.w.push_back(wt[i] * half);
        continue;
      }
      r.x.push_back(mid - half * a[i]);
      r.w.push_back(wt[i] * half);
      r.x.push_back(mid + half * a[i]);
      r.w.push_back(wt[i] * half);
    }
  }
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Disk kernels

/// P_D f at `point` by the trapezoid rule on uniform boundary samples
/// f(e^{2 pi i k/N}).
inline double poisson_integral(const std::vector<double>& boundary, cplx point) {
  const std::size_t n = boundary.size();
  if (n < 256) throw QuadratureUnderresolved("poisson_integral needs >= 256 boundary samples");
  const double r = std::abs(point);
  if (!(r < 1)) throw QuadratureUnderresolved("poisson_integral point must lie in the open unit disk");
  // The kernel peak has width ~ (1 - r); demand 4 samples across it.
  if (1 - r < 4 * two_pi<double>() / double(n))
    throw QuadratureUnderresolved("Poisson kernel at r=" + std::to_string(r) + " narrower than 4 samples of " +
                                  std::to_string(n));
  const double th = std::arg(point);
  double acc = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = two_pi<double>() * double(k) / double(n);
    acc += (1 - r * r) / (1 - 2 * r * std::cos(th - t) + r * r) * boundary[k];
  }
  return acc / double(n);
}

/// g_D(z, w) = log |(z - w)/(1 - z conj(w))|.
inline double green_disk(cplx z, cplx w) { return std::log(std::abs(z - w)) - std::log(std::abs(1.0 - z * std::conj(w))); }

struct GreenQuadrature {
  int theta = 512;
  int radial_panels = 8;  ///< 32-point Gauss panels in t, s = s_max t^2
};

/// (1/2pi) iint_D g_D(point, w) lap(w) dA(w), by polar quadrature centred at
/// the point so that the log singularity sits at the origin of the rule.
inline double green_potential(const std::function<double(cplx)>& lap, cplx point, const GreenQuadrature& q = {}) {
  if (!(std::abs(point) < 1)) throw QuadratureUnderresolved("green_potential point must lie in the open unit disk");
  static thread_local std::vector<std::pair<int, detail::GaussRule>> rules;
  const detail::GaussRule* rule = nullptr;
  for (const auto& [p, r] : rules)
    if (p == q.radial_panels) rule = &r;
  if (!rule) {
    rules.emplace_back(q.radial_panels, detail::gauss_unit(q.radial_panels));
    rule = &rules.back().second;
  }
  double acc = 0;
  for (int a = 0; a < q.theta; ++a) {
    const cplx e = unit_root<double>(a, q.theta);
    // Ray point + s e hits the unit circle at s_max: |point + s e|^2 = 1.
    const double b = std::real(point * std::conj(e));
    const double smax = -b + std::sqrt(b * b + 1 - std::norm(point));
    double ray = 0;
    for (std::size_t i = 0; i < rule->x.size(); ++i) {
      const double t = rule->x[i];
      const double s = smax * t * t;
      if (s == 0) continue;
      const cplx w = point + s * e;
      const double g = std::log(s) - std::log(std::abs(1.0 - point * std::conj(w)));
      ray += rule->w[i] * g * lap(w) * s * (2 * smax * t);
    }
    acc += ray;
  }
  return acc / q.theta;  // (1/2pi) * (2pi/theta) * sum
}

/// Uniform constant of the puncture construction,
///   c = (1/2pi) inf_eta iint_D d/dr g_D(., y)(eta) dA(y),
/// with eta taken in the boundary limit |eta| -> 1, where the puncture
/// inequality is used. There d/dr g_D(., y)(xi) is the Poisson kernel
/// (1 - |y|^2)/|xi - y|^2; the integral is done in polar coordinates centred at
/// xi, in which the integrand (1 - |y|^2)/s = -2 Re(conj(xi) e) - s is bounded.
inline double estimate_c(int theta_panels = 4, int s_panels = 2, int directions = 16) {
  const auto th = detail::gauss_unit(theta_panels);
  const auto sr = detail::gauss_unit(s_panels);
  double best = std::numeric_limits<double>::infinity();
  for (int d = 0; d < directions; ++d) {
    const cplx xi = unit_root<double>(d, directions);
    double acc = 0;
    // Inward directions e = -xi e^{i phi}, phi in (-pi/2, pi/2).
    for (std::size_t a = 0; a < th.x.size(); ++a) {
      const double phi = pi<double>() * (th.x[a] - 0.5);
      const cplx e = -xi * std::polar(1.0, phi);
      const double smax = -2 * std::real(std::conj(xi) * e);
      double ray = 0;
      for (std::size_t i = 0; i < sr.x.size(); ++i) {
        const double s = smax * sr.x[i];
        const cplx y = xi + s * e;
        const double kernel_times_s = (1 - std::norm(y)) / s;
        ray += sr.w[i] * kernel_times_s * smax;
      }
      acc += th.w[a] * pi<double>() * ray;
    }
    best = std::min(best, acc / two_pi<double>());
  }
  return best;
}

/// estimate_c() at the default resolution, computed once.
inline double cached_c() {
  static const double c = estimate_c();
  return c;
}

// ---------------------------------------------------------------------------
// Base potentials

/// Radial subharmonic base potential.
class BasePotential {
 public:
  virtual ~BasePotential() = default;
  virtual double value(cplx z) const = 0;
  virtual double laplacian(cplx z) const = 0;
  /// inf of the Laplacian over the closed disk B(c, r).
  virtual double inf_laplacian(cplx c, double r) const = 0;
  virtual double constant() const = 0;
  virtual std::string name() const = 0;
  /// Points where the potential is -infinity.
  virtual std::vector<cplx> poles() const { return {}; }
};

/// u0 = C log|z| on |z| < 2, max(C log|z|, C log^2|z|) on 2 <= |z| <= 3,
/// C log^2|z| beyond; Delta u0 = 2C/|z|^2 for |z| > 3.
class LogSquaredBase final : public BasePotential {
 public:
  explicit LogSquaredBase(double C) : C_(C) {
    if (!(C > 1)) throw Error("base potential constant C must be > 1");
  }
  double value(cplx z) const override {
    const double r = std::abs(z);
    if (r == 0) return kNegInfSentinel;
    const double l = std::log(r);
    if (r < 2) return C_ * l;
    if (r <= 3) return std::max(C_ * l, C_ * l * l);
    return C_ * l * l;
  }
  double laplacian(cplx z) const override {
    const double r = std::abs(z);
    return r <= std::exp(1.0) ? 0.0 : 2 * C_ / (r * r);  // log r is harmonic; log^2 r takes over at r = e
  }
  double inf_laplacian(cplx c, double r) const override {
    const double far = std::abs(c) + r;
    return 2 * C_ / (far * far);
  }
  double constant() const override { return C_; }
  std::string name() const override { return "log-squared"; }
  std::vector<cplx> poles() const override { return {cplx(0, 0)}; }

 private:
  double C_;
};

/// u = a |z|^2 + b, constant Laplacian 4a.
class QuadraticBase final : public BasePotential {
 public:
  QuadraticBase(double a, double b = 0) : a_(a), b_(b) {}
  double value(cplx z) const override { return a_ * std::norm(z) + b_; }
  double laplacian(cplx) const override { return 4 * a_; }
  double inf_laplacian(cplx, double) const override { return 4 * a_; }
  double constant() const override { return a_; }
  std::string name() const override { return "quadratic"; }

 private:
  double a_, b_;
};

/// C = 2^9 / c.
inline double default_C() { return 512.0 / cached_c(); }

// ---------------------------------------------------------------------------
// Punctures

struct PunctureDisk {
  int k = 0;
  cplx center;
  double radius = 0;
  double A = 0;
};

struct PunctureValue {
  double value = 0;
  bool neg_inf = false;
};

/// Harmonic extension of boundary samples through their discrete Fourier
/// series; accurate up to and on the unit circle when the data are smooth.
class HarmonicExtension {
 public:
  HarmonicExtension() = default;
  explicit HarmonicExtension(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    double a0 = 0;
    for (double s : samples) a0 += s;
    a0_ = a0 / double(n);
    coef_.assign(n / 2, cplx(0, 0));
    for (std::size_t m = 1; m < n / 2; ++m) {
      cplx acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc += samples[k] * unit_root<double>(-long(m * k % n), long(n));
      coef_[m] = acc / double(n);
    }
    // Drop the tail below roundoff of the mean.
    const double floor = 1e-17 * (std::abs(a0_) + 1);
    std::size_t keep = coef_.size();
    while (keep > 1 && std::abs(coef_[keep - 1]) < floor) --keep;
    coef_.resize(keep);
  }

  /// a0 + 2 Re sum_m c_m zeta^m, |zeta| <= 1.
  double operator()(cplx zeta) const {
    cplx acc = 0;
    for (std::size_t m = coef_.size(); m-- > 1;) acc = acc * zeta + coef_[m];
    acc *= zeta;
    return a0_ + 2 * acc.real();
  }
  std::size_t terms() const { return coef_.size(); }

 private:
  double a0_ = 0;
  std::vector<cplx> coef_;
};

class PuncturedPotential {
 public:
  PuncturedPotential(std::shared_ptr<const BasePotential> base, std::vector<PunctureDisk> disks, int samples = 1024)
      : base_(std::move(base)), disks_(std::move(disks)), samples_(samples) {
    for (std::size_t i = 0; i < disks_.size(); ++i)
      for (std::size_t j = i + 1; j < disks_.size(); ++j)
        if (std::abs(disks_[i].center - disks_[j].center) < disks_[i].radius + disks_[j].radius)
          throw Error("puncture disks must be pairwise disjoint");
    for (const auto& d : disks_) {
      std::vector<double> b(static_cast<std::size_t>(samples));
      for (int k = 0; k < samples; ++k) b[static_cast<std::size_t>(k)] = base_->value(d.center + d.radius * unit_root<double>(k, samples));
      boundary_.push_back(b);
      ext_.emplace_back(b);
    }
  }

  const BasePotential& base() const { return *base_; }
  const std::vector<PunctureDisk>& disks() const { return disks_; }
  const std::vector<double>& boundary_samples(std::size_t i) const { return boundary_[i]; }

  /// Same construction with every A_k multiplied by `factor`.
  PuncturedPotential with_strength(double factor) const {
    auto d = disks_;
    for (auto& x : d) x.A *= factor;
    return PuncturedPotential(base_, d, samples_);
  }

  /// Index of the disk containing z (closed), or -1.
  int disk_of(cplx z) const {
    for (std::size_t i = 0; i < disks_.size(); ++i)
      if (std::abs(z - disks_[i].center) <= disks_[i].radius) return static_cast<int>(i);
    return -1;
  }

  PunctureValue eval(cplx z) const {
    const int i = disk_of(z);
    if (i < 0) {
      const double v = base_->value(z);
      return {v, v == kNegInfSentinel};
    }
    return inner(static_cast<std::size_t>(i), z);
  }
  double value(cplx z) const { return eval(z).value; }

  /// The inner formula of disk i, also valid slightly beyond its boundary.
  PunctureValue inner(std::size_t i, cplx z) const {
    const auto& d = disks_[i];
    const cplx zeta = (z - d.center) / d.radius;
    const double rho = std::abs(zeta);
    if (rho == 0) return {kNegInfSentinel, true};
    return {ext_[i](zeta) + d.A * std::log(rho), false};
  }

  /// Every point where v = -infinity.
  std::vector<cplx> singular_points() const {
    auto out = base_->poles();
    for (const auto& d : disks_) out.push_back(d.center);
    return out;
  }

 private:
  std::shared_ptr<const BasePotential> base_;
  std::vector<PunctureDisk> disks_;
  int samples_;
  std::vector<std::vector<double>> boundary_;
  std::vector<HarmonicExtension> ext_;
};

/// Disks B(2^k, 2^{k-3}) with A_k = c r_k^2 inf_{B_k} Delta u.
inline std::vector<PunctureDisk> dyadic_disks(const BasePotential& base, int k_min, int k_max, double c) {
  if (k_min < 2) throw Error("puncture disks start at k = 2");
  std::vector<PunctureDisk> out;
  for (int k = k_min; k <= k_max; ++k) {
    PunctureDisk d;
    d.k = k;
    d.center = cplx(std::ldexp(1.0, k), 0);
    d.radius = std::ldexp(1.0, k - 3);
    d.A = c * d.radius * d.radius * base.inf_laplacian(d.center, d.radius);
    if (!(d.A > 0)) throw Error("puncture strength must be positive (inf Delta u > 0 on B_k)");
    out.push_back(d);
  }
  return out;
}

inline PuncturedPotential puncture(std::shared_ptr<const BasePotential> base, int k_min, int k_max,
                                   double c = cached_c(), int samples = 1024) {
  for (int k = k_min; k <= k_max; ++k)
    if (std::ldexp(1.0, k) - std::ldexp(1.0, k - 3) <= 3) throw Error("puncture disks must lie in |z| > 3");
  auto disks = dyadic_disks(*base, k_min, k_max, c);
  return PuncturedPotential(std::move(base), std::move(disks), samples);
}

// ---------------------------------------------------------------------------
// Discrete checks

struct GridSpec {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double h = 0.125;
  int nx() const { return static_cast<int>(std::floor((x1 - x0) / h + 1e-9)) + 1; }
  int ny() const { return static_cast<int>(std::floor((y1 - y0) / h + 1e-9)) + 1; }
  cplx at(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
};

struct SubharmonicOptions {
  double tol = -1;             ///< < 0: 10 h^2
  double exclusion_steps = 2;  ///< skip nodes closer than this many steps to a singular point
  int jump_angles = 256;
  double jump_step = 1e-4;  ///< relative to r_k
};

struct Offender {
  cplx z;
  double value;
  std::string kind;  ///< "laplacian" or "jump"
};

struct SubharmonicReport {
  double h = 0;
  double tol = 0;
  long points_checked = 0;
  long points_excluded = 0;
  double min_laplacian = std::numeric_limits<double>::infinity();
  cplx argmin_laplacian;
  /// min of the discrete Laplacian of v / C (same nodes); scale-free diagnostic.
  double min_laplacian_over_C = std::numeric_limits<double>::infinity();
  /// max over sampled boundary points of (inner - outer) outward normal derivative.
  double max_jump = -std::numeric_limits<double>::infinity();
  cplx argmax_jump;
  std::vector<double> max_jump_per_disk;
  std::vector<Offender> offenders;  ///< first offenders found, capped

  bool laplacian_ok() const { return min_laplacian >= -tol; }
  bool jump_ok() const { return max_jump <= tol; }
  bool ok() const { return laplacian_ok() && jump_ok(); }
};

inline SubharmonicReport check_subharmonic(const PuncturedPotential& v, const GridSpec& g,
                                           const SubharmonicOptions& opt = {}) {
  SubharmonicReport rep;
  rep.h = g.h;
  rep.tol = opt.tol < 0 ? 10 * g.h * g.h : opt.tol;
  const int nx = g.nx(), ny = g.ny();
  const auto sing = v.singular_points();
  std::vector<double> val(static_cast<std::size_t>(nx) * ny);
  // near: stencil centre too close to a singular point; pole: the node is one.
  std::vector<char> near(val.size(), 0), pole(val.size(), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const cplx z = g.at(i, j);
      const std::size_t id = static_cast<std::size_t>(j) * nx + i;
      for (const auto& s : sing) {
        const double d = std::abs(z - s);
        if (d < opt.exclusion_steps * g.h - 1e-12) near[id] = 1;
        if (d < 1e-12 * g.h) pole[id] = 1;
      }
      val[id] = pole[id] ? 0.0 : v.value(z);
    }
  const double C = v.base().constant();
  constexpr std::size_t kMaxOffenders = 32;
  for (int j = 1; j + 1 < ny; ++j)
    for (int i = 1; i + 1 < nx; ++i) {
      const std::size_t id = static_cast<std::size_t>(j) * nx + i;
      if (near[id] || pole[id - 1] || pole[id + 1] || pole[id - nx] || pole[id + nx]) {
        ++rep.points_excluded;
        continue;
      }
      ++rep.points_checked;
      const double lap = (val[id - 1] + val[id + 1] + val[id - nx] + val[id + nx] - 4 * val[id]) / (g.h * g.h);
      if (lap < rep.min_laplacian) {
        rep.min_laplacian = lap;
        rep.argmin_laplacian = g.at(i, j);
      }
      rep.min_laplacian_over_C = std::min(rep.min_laplacian_over_C, lap / C);
      if (lap < -rep.tol && rep.offenders.size() < kMaxOffenders) rep.offenders.push_back({g.at(i, j), lap, "laplacian"});
    }

  for (std::size_t k = 0; k < v.disks().size(); ++k) {
    const auto& d = v.disks()[k];
    const double dl = opt.jump_step * d.radius;
    double worst = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < opt.jump_angles; ++a) {
      const cplx e = unit_root<double>(a, opt.jump_angles);
      const cplx xi = d.center + d.radius * e;
      // One-sided second-order differences along the outward normal.
      const double f0 = v.inner(k, xi).value;
      const double inner_d = (3 * f0 - 4 * v.inner(k, xi - dl * e).value + v.inner(k, xi - 2 * dl * e).value) / (2 * dl);
      const double g0 = v.base().value(xi);
      const double outer_d =
          (-3 * g0 + 4 * v.base().value(xi + dl * e) - v.base().value(xi + 2 * dl * e)) / (2 * dl);
      const double jump = inner_d - outer_d;
      worst = std::max(worst, jump);
      if (jump > rep.max_jump) {
        rep.max_jump = jump;
        rep.argmax_jump = xi;
      }
      if (jump > rep.tol && rep.offenders.size() < kMaxOffenders) rep.offenders.push_back({xi, jump, "jump"});
    }
    rep.max_jump_per_disk.push_back(worst);
  }
  return rep;
}

inline std::string describe(const std::vector<Offender>& off, std::size_t limit = 5) {
  std::string s;
  for (std::size_t i = 0; i < std::min(limit, off.size()); ++i) {
    if (i) s += "; ";
    s += off[i].kind + " " + std::to_string(off[i].value) + " at (" + std::to_string(off[i].z.real()) + ", " +
         std::to_string(off[i].z.imag()) + ")";
  }
  if (off.size() > limit) s += "; ...";
  return s;
}

/// Throwing form of check_subharmonic.
inline SubharmonicReport verify_subharmonic(const PuncturedPotential& v, const GridSpec& g,
                                            const SubharmonicOptions& opt = {}) {
  auto rep = check_subharmonic(v, g, opt);
  if (!rep.ok()) throw SubharmonicityViolation("subharmonicity violated: " + describe(rep.offenders));
  return rep;
}

struct PunctureBound {
  int k = 0;
  double delta = 0;
  double max_v = 0;  ///< sampled max of v on the closed disk B(2^k, delta r_k)
  double bound = 0;  ///< 4 C k^2 + 4 log delta
  bool ok() const { return max_v <= bound; }
};

/// Samples v on concentric circles of B(2^k, delta r_k) (the maximum of a
/// subharmonic function is taken on the outer circle).
inline PunctureBound puncture_bound(const PuncturedPotential& v, std::size_t disk, double delta, int angles = 512,
                                    int rings = 8) {
  const auto& d = v.disks().at(disk);
  PunctureBound b;
  b.k = d.k;
  b.delta = delta;
  b.max_v = -std::numeric_limits<double>::infinity();
  for (int q = 1; q <= rings; ++q) {
    const double rad = delta * d.radius * q / rings;
    for (int a = 0; a < angles; ++a) b.max_v = std::max(b.max_v, v.value(d.center + rad * unit_root<double>(a, angles)));
  }
  b.bound = 4 * v.base().constant() * d.k * d.k + 4 * std::log(delta);
  return b;
}

/// Majorant bound max_{B(z_k, delta r_k)} v <= max_{B_k} u - A_k log(1/delta), with
/// the base maximum sampled on the boundary of B_k.
inline PunctureBound majorant_bound(const PuncturedPotential& v, std::size_t disk, double delta, int angles = 1024) {
  auto b = puncture_bound(v, disk, delta);
  const auto& d = v.disks().at(disk);
  double umax = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < angles; ++a) umax = std::max(umax, v.base().value(d.center + d.radius * unit_root<double>(a, angles)));
  b.bound = umax + d.A * std::log(delta);
  return b;
}

}  // namespace ordzero

#pragma once

// Discrete weighted dbar problem on a uniform box:
//
//   minimise  sum |alpha|^2 W h^2,   W = e^{-u} / (1 + |z|^2)^2,
//   subject to  D alpha = g  on interior nodes,
//
// with D the centred stencil (1/4h)[(a_E - a_W) + i (a_N - a_S)], g = dbar(chi) h_model,
// and f = chi h_model - alpha. Solved through the dual system D W^{-1} D* mu = g.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ordzero/errors.hpp"
#include "ordzero/growth.hpp"
#include "ordzero/subharmonic.hpp"

namespace ordzero {

using Field = std::vector<cplx>;

struct DbarConfig {
  int grid_n = 512;  ///< cells per side
  double box_half_width = 32;
  cplx box_center{8, 0};
  int k_min = 2, k_max = 5;
  double weight_cap = 1e12;     ///< upper clamp of e^{-u}
  double weight_floor = 1e-200;  ///< lower clamp of e^{-u}
  double weight_C = 2;          ///< constant of the base potential used as weight
  double cg_tol = 1e-8;
  int cg_max_iter = 20000;
};

struct Grid {
  int n = 0;  ///< nodes per side
  double h = 0;
  double x0 = 0, y0 = 0;

  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  std::size_t id(int a, int b) const { return static_cast<std::size_t>(b) * n + a; }
  cplx at(int a, int b) const { return {x0 + a * h, y0 + b * h}; }
  double x1() const { return x0 + (n - 1) * h; }
  double y1() const { return y0 + (n - 1) * h; }
  bool interior(int a, int b) const { return a > 0 && b > 0 && a + 1 < n && b + 1 < n; }
  bool contains(cplx z) const { return z.real() >= x0 && z.real() <= x1() && z.imag() >= y0 && z.imag() <= y1(); }

  /// Bilinear interpolation of a nodal field.
  cplx sample(const Field& f, cplx z) const {
    if (!contains(z)) throw Error("grid sample outside box");
    const double fx = (z.real() - x0) / h, fy = (z.imag() - y0) / h;
    const int a = std::min(static_cast<int>(std::floor(fx)), n - 2), b = std::min(static_cast<int>(std::floor(fy)), n - 2);
    const double tx = fx - a, ty = fy - b;
    return (1 - tx) * (1 - ty) * f[id(a, b)] + tx * (1 - ty) * f[id(a + 1, b)] + (1 - tx) * ty * f[id(a, b + 1)] +
           tx * ty * f[id(a + 1, b + 1)];
  }
};

inline Grid make_grid(const DbarConfig& c) {
  if (c.grid_n < 4) throw Error("dbar grid needs at least 4 cells per side");
  if (!(c.box_half_width > 0)) throw Error("dbar box half width must be positive");
  Grid g;
  g.n = c.grid_n + 1;
  g.h = 2 * c.box_half_width / c.grid_n;
  g.x0 = c.box_center.real() - c.box_half_width;
  g.y0 = c.box_center.imag() - c.box_half_width;
  return g;
}

// ---------------------------------------------------------------------------
// Cutoff and model map

/// C^2 smoothstep 6t^5 - 15t^4 + 10t^3 and its derivative.
inline double smoothstep(double t) { return t <= 0 ? 0 : t >= 1 ? 1 : t * t * t * (t * (6 * t - 15) + 10); }
inline double smoothstep_deriv(double t) { return t <= 0 || t >= 1 ? 0 : 30 * t * t * (1 - t) * (1 - t); }

/// chi = 1 on B(2^k, 2^{k-3}), 0 outside D_k = B(2^k, 2^{k-2}), radial in between.
struct CutoffSpec {
  int k_min = 2, k_max = 2;
  double A = 0;                 ///< max over k of measured max|grad chi| 2^k
  std::vector<double> A_per_k;  ///< measured per annulus

  static double inner(int k) { return std::ldexp(1.0, k - 3); }
  static double outer(int k) { return std::ldexp(1.0, k - 2); }
  static cplx center(int k) { return {std::ldexp(1.0, k), 0}; }

  /// Index of the D_k containing z, or 0.
  int disk_of(cplx z) const {
    for (int k = k_min; k <= k_max; ++k)
      if (std::abs(z - center(k)) < outer(k)) return k;
    return 0;
  }
  double value(cplx z) const {
    const int k = disk_of(z);
    if (!k) return 0;
    const double t = (std::abs(z - center(k)) - inner(k)) / (outer(k) - inner(k));
    return 1 - smoothstep(t);
  }
  /// dbar chi = phi'(rho) (z - c) / (2 rho).
  cplx dbar(cplx z) const {
    const int k = disk_of(z);
    if (!k) return 0;
    const cplx d = z - center(k);
    const double rho = std::abs(d);
    const double t = (rho - inner(k)) / (outer(k) - inner(k));
    const double dphi = -smoothstep_deriv(t) / (outer(k) - inner(k));
    if (dphi == 0) return 0;
    return dphi * d / (2 * rho);
  }
};

inline CutoffSpec build_cutoff(int k_min, int k_max, int samples = 4096) {
  if (k_min < 2 || k_max < k_min) throw Error("cutoff k range must lie in {2, 3, ...}");
  CutoffSpec c;
  c.k_min = k_min;
  c.k_max = k_max;
  for (int k = k_min; k <= k_max; ++k) {
    double best = 0;
    for (int i = 0; i <= samples; ++i) {
      const double rho = CutoffSpec::inner(k) + (CutoffSpec::outer(k) - CutoffSpec::inner(k)) * i / samples;
      const cplx z = CutoffSpec::center(k) + rho * unit_root<double>(i, 7);  // direction is irrelevant
      best = std::max(best, 2 * std::abs(c.dbar(z)));                      // |grad chi| = 2 |dbar chi|
    }
    c.A_per_k.push_back(best * std::ldexp(1.0, k));
    c.A = std::max(c.A, c.A_per_k.back());
  }
  return c;
}

/// h = M sum_{k in J} 1_{D_k}.
struct ModelMap {
  std::set<int> J;
  double M = 0;

  ModelMap() = default;
  ModelMap(std::set<int> j, double m) : J(std::move(j)), M(m) {
    if (!J.empty() && *J.begin() < 2) throw Error("model map indices start at 2");
    if (!J.empty() && M > double(*J.begin()) * *J.begin()) throw Error("model map needs M <= (min J)^2");
  }
  double value(cplx z) const {
    for (int k : J)
      if (std::abs(z - CutoffSpec::center(k)) < CutoffSpec::outer(k)) return M;
    return 0;
  }
  double at_node(int k) const { return J.count(k) ? M : 0.0; }
};

// ---------------------------------------------------------------------------
// Problem

struct DbarProblem {
  DbarConfig config;
  Grid grid;
  CutoffSpec chi;
  ModelMap model;
  std::shared_ptr<const PuncturedPotential> u;
  std::vector<double> eu;  ///< e^{-u}, clamped
  std::vector<double> W;   ///< eu / (1 + |z|^2)^2
  Field g;                 ///< zero on boundary nodes
  long capped_nodes = 0;
};

/// Weight potential: log-squared base with the configured constant, punctured on k_min..k_max.
inline std::shared_ptr<const PuncturedPotential> dbar_potential(const DbarConfig& c) {
  auto base = std::make_shared<LogSquaredBase>(c.weight_C);
  return std::make_shared<PuncturedPotential>(puncture(base, c.k_min, c.k_max));
}

inline void fill_weights(DbarProblem& p) {
  const auto& gr = p.grid;
  p.eu.assign(gr.size(), 0);
  p.W.assign(gr.size(), 0);
  p.capped_nodes = 0;
  for (int b = 0; b < gr.n; ++b)
    for (int a = 0; a < gr.n; ++a) {
      const cplx z = gr.at(a, b);
      const auto v = p.u->eval(z);
      double e = v.neg_inf ? p.config.weight_cap : std::exp(-v.value);
      if (e > p.config.weight_cap) {
        e = p.config.weight_cap;
        ++p.capped_nodes;
      } else if (v.neg_inf) {
        ++p.capped_nodes;
      }
      e = std::max(e, p.config.weight_floor);
      const double q = 1 + std::norm(z);
      p.eu[gr.id(a, b)] = e;
      p.W[gr.id(a, b)] = e / (q * q);
    }
}

/// g = dbar(chi) h on interior nodes.
inline Field assemble_rhs(const CutoffSpec& chi, const ModelMap& h, const Grid& grid) {
  for (int k : h.J) {
    if (k < chi.k_min || k > chi.k_max) throw Error("model index " + std::to_string(k) + " outside cutoff range");
    const double cells = (CutoffSpec::outer(k) - CutoffSpec::inner(k)) / grid.h;
    if (cells < 8)
      throw GridTooCoarse("annulus k=" + std::to_string(k) + " spans " + std::to_string(cells) + " cells (< 8)");
    const cplx c = CutoffSpec::center(k);
    const double r = CutoffSpec::outer(k) + grid.h;
    if (!grid.contains(c - cplx(r, r)) || !grid.contains(c + cplx(r, r)))
      throw Error("disk D_" + std::to_string(k) + " does not fit inside the dbar box");
  }
  Field g(grid.size(), cplx(0, 0));
  if (h.J.empty()) return g;
  for (int b = 1; b + 1 < grid.n; ++b)
    for (int a = 1; a + 1 < grid.n; ++a) {
      const cplx z = grid.at(a, b);
      const double hv = h.value(z);
      if (hv != 0) g[grid.id(a, b)] = chi.dbar(z) * hv;
    }
  return g;
}

inline DbarProblem make_problem(const DbarConfig& c, std::set<int> J, double M) {
  DbarProblem p;
  p.config = c;
  p.grid = make_grid(c);
  p.chi = build_cutoff(c.k_min, c.k_max);
  p.model = ModelMap(std::move(J), M);
  p.u = dbar_potential(c);
  fill_weights(p);
  p.g = assemble_rhs(p.chi, p.model, p.grid);
  return p;
}

// ---------------------------------------------------------------------------
// Stencils

/// D alpha on interior nodes, 0 on the boundary.
inline Field apply_D(const Grid& gr, const Field& al) {
  Field out(gr.size(), cplx(0, 0));
  const double s = 1 / (4 * gr.h);
  const std::size_t n = static_cast<std::size_t>(gr.n);
  for (int b = 1; b + 1 < gr.n; ++b)
    for (int a = 1; a + 1 < gr.n; ++a) {
      const std::size_t i = gr.id(a, b);
      const cplx dx = al[i + 1] - al[i - 1], dy = al[i + n] - al[i - n];
      out[i] = s * cplx(dx.real() - dy.imag(), dx.imag() + dy.real());
    }
  return out;
}

/// Adjoint: (D* mu)(a,b) = (1/4h)[mu(a-1,b) - mu(a+1,b) - i mu(a,b-1) + i mu(a,b+1)],
/// with mu supported on interior nodes.
inline Field apply_Dstar(const Grid& gr, const Field& mu) {
  Field out(gr.size(), cplx(0, 0));
  const double s = 1 / (4 * gr.h);
  auto m = [&](int a, int b) { return gr.interior(a, b) ? mu[gr.id(a, b)] : cplx(0, 0); };
  for (int b = 0; b < gr.n; ++b)
    for (int a = 0; a < gr.n; ++a) {
      const cplx dx = m(a - 1, b) - m(a + 1, b), dy = m(a, b + 1) - m(a, b - 1);
      out[gr.id(a, b)] = s * cplx(dx.real() - dy.imag(), dx.imag() + dy.real());
    }
  return out;
}

inline double norm2(const Field& f) {
  double s = 0;
  for (const auto& x : f) s += std::norm(x);
  return std::sqrt(s);
}

/// sum |alpha|^2 w h^2.
inline double weighted_norm2(const Grid& gr, const Field& al, const std::vector<double>& w) {
  double s = 0;
  for (std::size_t i = 0; i < al.size(); ++i) s += std::norm(al[i]) * w[i];
  return s * gr.h * gr.h;
}

/// ||D alpha - g|| / ||g|| over interior nodes (0 when g = 0 and alpha solves it).
inline double constraint_residual(const Grid& gr, const Field& al, const Field& g) {
  const auto d = apply_D(gr, al);
  double num = 0;
  for (std::size_t i = 0; i < d.size(); ++i) num += std::norm(d[i] - g[i]);
  const double den = norm2(g);
  return den > 0 ? std::sqrt(num) / den : std::sqrt(num);
}

// ---------------------------------------------------------------------------
// Solver

namespace detail {

/// D W^{-1} D* on interior-supported fields, in scalar type T.
template <class T>
struct DualOperator {
  using C = std::complex<T>;
  int n = 0;
  T s = 0;  ///< 1 / 4h
  std::vector<T> winv;

  DualOperator(const Grid& gr, const std::vector<double>& W) : n(gr.n), s(T(1) / (T(4) * T(gr.h))), winv(W.size()) {
    for (std::size_t i = 0; i < W.size(); ++i) winv[i] = T(1) / T(W[i]);
  }
  static C comb(const C& dx, const C& dy) { return {dx.real() - dy.imag(), dx.imag() + dy.real()}; }

  /// out = D alpha on interior nodes, 0 elsewhere.
  void d(const std::vector<C>& al, std::vector<C>& out) const {
    const std::size_t N = static_cast<std::size_t>(n);
    out.assign(N * N, C(0));
    for (std::size_t b = 1; b + 1 < N; ++b) {
      const C* row = al.data() + b * N;
      C* o = out.data() + b * N;
      for (std::size_t a = 1; a + 1 < N; ++a) o[a] = s * comb(row[a + 1] - row[a - 1], row[a + N] - row[a - N]);
    }
  }
  /// out = D* mu; mu must vanish on boundary nodes.
  void dstar(const std::vector<C>& mu, std::vector<C>& out) const {
    const int N = n;
    out.assign(static_cast<std::size_t>(N) * N, C(0));
    auto at = [&](int a, int b) { return a < 0 || b < 0 || a >= N || b >= N ? C(0) : mu[static_cast<std::size_t>(b) * N + a]; };
    for (int b = 0; b < N; ++b) {
      const bool edge_row = b == 0 || b == N - 1;
      for (int a = 0; a < N; ++a) {
        C dx, dy;
        if (edge_row || a == 0 || a == N - 1) {
          dx = at(a - 1, b) - at(a + 1, b);
          dy = at(a, b + 1) - at(a, b - 1);
        } else {
          const std::size_t i = static_cast<std::size_t>(b) * N + a;
          dx = mu[i - 1] - mu[i + 1];
          dy = mu[i + N] - mu[i - N];
        }
        out[static_cast<std::size_t>(b) * N + a] = s * comb(dx, dy);
      }
    }
  }
  /// alpha = W^{-1} D* mu.
  void primal(const std::vector<C>& mu, std::vector<C>& al) const {
    dstar(mu, al);
    for (std::size_t i = 0; i < al.size(); ++i) al[i] *= winv[i];
  }
  void apply(const std::vector<C>& mu, std::vector<C>& out, std::vector<C>& tmp) const {
    primal(mu, tmp);
    d(tmp, out);
  }
};

template <class T>
T norm2(const std::vector<std::complex<T>>& f) {
  T s = 0;
  for (const auto& x : f) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace detail

template <class T>
struct CGResult {
  std::vector<std::complex<T>> alpha;
  double residual = 0;  ///< ||D alpha - g|| / ||g||, alpha evaluated in T
  int iterations = 0;
  bool converged = false;
};

/// Minimum weighted-norm solution by Jacobi-preconditioned CG on D W^{-1} D* mu = g, in
/// scalar type T. Never throws on non-convergence.
template <class T>
CGResult<T> cg_min_norm(const Grid& gr, const std::vector<double>& W, const Field& g, double tol, int max_iter,
                        int true_residual_every = 200) {
  using C = std::complex<T>;
  CGResult<T> res;
  const std::size_t N = gr.size(), n = static_cast<std::size_t>(gr.n);
  std::vector<C> gg(N);
  for (std::size_t i = 0; i < N; ++i) gg[i] = C(T(g[i].real()), T(g[i].imag()));
  const T gn = detail::norm2(gg);
  if (gn == 0) {
    res.alpha.assign(N, C(0));
    res.converged = true;
    return res;
  }
  const detail::DualOperator<T> A(gr, W);
  std::vector<T> pinv(N, T(0));
  for (std::size_t b = 1; b + 1 < n; ++b)
    for (std::size_t a = 1; a + 1 < n; ++a) {
      const std::size_t i = b * n + a;
      pinv[i] = T(1) / (A.s * A.s * (A.winv[i - 1] + A.winv[i + 1] + A.winv[i - n] + A.winv[i + n]));
    }
  auto dot = [](const std::vector<C>& x, const std::vector<C>& y) {
    T s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    return s;
  };

  std::vector<C> mu(N, C(0)), r = gg, z(N), p(N), q(N), tmp(N);
  for (std::size_t i = 0; i < N; ++i) z[i] = pinv[i] * r[i];
  p = z;
  T rz = dot(r, z);
  int it = 0;
  double rel = 1;
  while (it < max_iter) {
    A.apply(p, q, tmp);
    const T pq = dot(p, q);
    if (!(pq > 0)) break;
    const T step = rz / pq;
    for (std::size_t i = 0; i < N; ++i) {
      mu[i] += step * p[i];
      r[i] -= step * q[i];
    }
    ++it;
    rel = static_cast<double>(detail::norm2(r) / gn);
    if (rel <= tol || it % true_residual_every == 0) {
      // Replace the recursive residual by the true one.
      A.apply(mu, q, tmp);
      for (std::size_t i = 0; i < N; ++i) r[i] = gg[i] - q[i];
      rel = static_cast<double>(detail::norm2(r) / gn);
      if (rel <= tol) break;
    }
    for (std::size_t i = 0; i < N; ++i) z[i] = pinv[i] * r[i];
    const T rz_new = dot(r, z);
    const T beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < N; ++i) p[i] = z[i] + beta * p[i];
  }
  A.primal(mu, res.alpha);
  A.d(res.alpha, q);
  for (std::size_t i = 0; i < N; ++i) q[i] -= gg[i];
  res.residual = static_cast<double>(detail::norm2(q) / gn);
  res.iterations = it;
  res.converged = res.residual <= tol;
  return res;
}

using FieldL = std::vector<std::complex<long double>>;

struct SolveResult {
  Field alpha;     ///< rounded to double
  FieldL alpha_l;  ///< accumulated solution; the residual refers to this field
  double residual = 0;  ///< ||D alpha - g|| / ||g||
  int iterations = 0;   ///< CG iterations over all passes
  int passes = 0;       ///< refinement passes
};

/// ||D alpha - g|| / ||g|| for a long double field.
inline double constraint_residual(const Grid& gr, const FieldL& al, const Field& g) {
  const detail::DualOperator<long double> A(gr, std::vector<double>(gr.size(), 1.0));
  FieldL d;
  A.d(al, d);
  long double num = 0, den = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    num += std::norm(d[i] - std::complex<long double>(g[i].real(), g[i].imag()));
    den += std::norm(g[i]);
  }
  return static_cast<double>(den > 0 ? std::sqrt(num / den) : std::sqrt(num));
}

/// Minimum weighted-norm solution. The far-field solution is large where the weight is
/// small, which floors a binary64 residual near 1e-6; passes of double CG on the current
/// residual are therefore accumulated in long double until ||D alpha - g|| / ||g|| <= tol.
inline SolveResult solve_min_norm(const Grid& gr, const std::vector<double>& W, const Field& g, double tol,
                                  int max_iter, double pass_tol = 1e-5, int max_passes = 8) {
  using CL = std::complex<long double>;
  SolveResult res;
  const std::size_t N = gr.size();
  const detail::DualOperator<long double> A(gr, W);
  FieldL gl(N), r(N), d;
  for (std::size_t i = 0; i < N; ++i) gl[i] = CL(g[i].real(), g[i].imag());
  const long double gn = detail::norm2(gl);
  res.alpha_l.assign(N, CL(0));
  r = gl;
  double rel = gn > 0 ? 1.0 : 0.0;
  while (rel > tol) {
    if (res.iterations >= max_iter || res.passes >= max_passes)
      throw NoConvergence("dbar CG stopped after " + std::to_string(res.iterations) + " iterations (" +
                              std::to_string(res.passes) + " passes) at residual " + std::to_string(rel),
                          rel);
    Field rd(N);
    for (std::size_t i = 0; i < N; ++i) rd[i] = cplx(static_cast<double>(r[i].real()), static_cast<double>(r[i].imag()));
    const auto cg = cg_min_norm<double>(gr, W, rd, pass_tol, max_iter - res.iterations);
    res.iterations += cg.iterations;
    ++res.passes;
    for (std::size_t i = 0; i < N; ++i) res.alpha_l[i] += CL(cg.alpha[i].real(), cg.alpha[i].imag());
    A.d(res.alpha_l, d);
    for (std::size_t i = 0; i < N; ++i) r[i] = gl[i] - d[i];
    const double next = static_cast<double>(detail::norm2(r) / gn);
    if (!(next < 0.5 * rel))
      throw NoConvergence("dbar refinement stagnated at residual " + std::to_string(next), next);
    rel = next;
  }
  res.residual = rel;
  res.alpha.resize(N);
  for (std::size_t i = 0; i < N; ++i)
    res.alpha[i] = cplx(static_cast<double>(res.alpha_l[i].real()), static_cast<double>(res.alpha_l[i].imag()));
  return res;
}

inline SolveResult solve_min_norm(const DbarProblem& p) {
  return solve_min_norm(p.grid, p.W, p.g, p.config.cg_tol, p.config.cg_max_iter);
}

// ---------------------------------------------------------------------------
// Certificates

struct HormanderCertificate {
  double lhs = 0;    ///< sum |alpha|^2 e^{-u} / (1+|z|^2)^2 h^2
  double rhs = 0;    ///< sum |g|^2 e^{-u} h^2
  double slack = 0;  ///< max(0, 2 lhs / rhs - 1): lhs <= rhs/2 (1 + slack)
  bool ok(double max_slack = 1) const { return slack <= max_slack; }
};

inline HormanderCertificate hormander(const DbarProblem& p, const Field& alpha) {
  HormanderCertificate c;
  c.lhs = weighted_norm2(p.grid, alpha, p.W);
  c.rhs = weighted_norm2(p.grid, p.g, p.eu);
  c.slack = c.rhs > 0 ? std::max(0.0, 2 * c.lhs / c.rhs - 1) : 0;
  return c;
}

/// A^2 (3 pi / 64) sum_{k >= 1} k^4 e^{-C ln^2(2) (k-1)^2}: majorant of sum |g|^2 e^{-u} for
/// every J and M <= (min J)^2, using ln|z| >= (k-1) ln 2 on the annulus of D_k.
inline double i_majorant(double C, double A) {
  double s = 0;
  const double l2 = std::log(2.0);
  for (int k = 1; k < 400; ++k) {
    const double t = std::pow(double(k), 4) * std::exp(-C * l2 * l2 * (k - 1) * (k - 1));
    s += t;
    if (k > 2 && t < 1e-18 * s) break;
  }
  return A * A * 3 * pi<double>() / 64 * s;
}

struct NodeError {
  int k = 0;
  double target = 0;
  cplx value;
  double error = 0;
};

struct DbarSolution {
  Field f;  ///< chi h - alpha
  std::vector<NodeError> nodes;
  double holomorphy_residual = 0;  ///< ||D f|| / ||g||: stencil truncation of D(chi h) against the analytic g
  double max_node_error() const {
    double m = 0;
    for (const auto& n : nodes) m = std::max(m, n.error);
    return m;
  }
};

inline DbarSolution assemble_f(const DbarProblem& p, const Field& alpha) {
  DbarSolution s;
  const auto& gr = p.grid;
  Field chih(gr.size());
  s.f.resize(gr.size());
  for (int b = 0; b < gr.n; ++b)
    for (int a = 0; a < gr.n; ++a) {
      const cplx z = gr.at(a, b);
      const std::size_t i = gr.id(a, b);
      chih[i] = p.chi.value(z) * p.model.value(z);
      s.f[i] = chih[i] - alpha[i];
    }
  for (int k = p.config.k_min; k <= p.config.k_max; ++k) {
    const cplx c = CutoffSpec::center(k);
    if (!gr.contains(c)) continue;
    NodeError e;
    e.k = k;
    e.target = p.model.at_node(k);
    e.value = gr.sample(s.f, c);
    e.error = std::abs(e.value - e.target);
    s.nodes.push_back(e);
  }
  const double gn = norm2(p.g);
  const double dn = norm2(apply_D(gr, s.f));
  s.holomorphy_residual = gn > 0 ? dn / gn : dn;
  return s;
}

/// Largest radius about the origin whose circle fits inside the box.
inline double max_circle_radius(const Grid& gr) {
  return std::min({-gr.x0, gr.x1(), -gr.y0, gr.y1()});
}

struct GrowthCertificate {
  std::vector<ModulusSample> samples;
  GrowthFit fit;
};

/// Sampled max |f| on |z| = r (bilinear interpolation), with the log^2 envelope fit.
inline GrowthCertificate growth_certificate(const Grid& gr, const Field& f, const std::vector<double>& radii,
                                            int angles = 1024) {
  GrowthCertificate c;
  const double rmax = max_circle_radius(gr);
  for (double r : radii) {
    if (!(r > 0) || r > rmax) throw Error("growth radius " + std::to_string(r) + " outside the dbar box");
    ModulusSample s;
    s.r = r;
    for (int a = 0; a < angles; ++a) {
      const cplx z = r * unit_root<double>(a, angles);
      const double m = std::abs(gr.sample(f, z));
      const double l = m > 0 ? std::log(m) : -std::numeric_limits<double>::infinity();
      if (l > s.log_max) {
        s.log_max = l;
        s.z = z;
      }
    }
    c.samples.push_back(s);
  }
  if (c.samples.size() >= 2) c.fit = fit_growth(c.samples);
  return c;
}

inline std::vector<double> default_dbar_radii(const Grid& gr) {
  std::vector<double> out;
  const double rmax = max_circle_radius(gr);
  for (double r : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 20.0, 24.0})
    if (r <= rmax) out.push_back(r);
  return out;
}

struct DbarResult {
  DbarProblem problem;
  SolveResult solve;
  DbarSolution solution;
  HormanderCertificate hormander;
  GrowthCertificate growth;
  double i_diagnostic = 0;  ///< sum |g|^2 e^{-u} h^2
  double i_majorant = 0;
};

/// End-to-end run for one (J, M).
inline DbarResult run_dbar(const DbarConfig& c, std::set<int> J, double M) {
  DbarResult r;
  r.problem = make_problem(c, std::move(J), M);
  r.solve = solve_min_norm(r.problem);
  r.solution = assemble_f(r.problem, r.solve.alpha);
  r.hormander = hormander(r.problem, r.solve.alpha);
  r.growth = growth_certificate(r.problem.grid, r.solution.f, default_dbar_radii(r.problem.grid));
  r.i_diagnostic = r.hormander.rhs;
  r.i_majorant = i_majorant(c.weight_C, r.problem.chi.A);
  return r;
}

}  // namespace ordzero

#pragma once

// Maximum-modulus sampling on spheres of C^2 and log^2 envelope fits.
//
// A sampled map exposes
//   auto at(std::complex<double> w) const;          // per-w precomputation
//   double log_norm(const AtW&, std::complex<double> z) const;   // ln max(|f1|, |f2|)
// so that the w-dependent products are built once per w-sample.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "ordzero/errors.hpp"
#include "ordzero/numeric.hpp"

namespace ordzero {

struct SphereDensity {
  int phi = 64;  ///< samples of arg z
  int psi = 64;  ///< samples of arg w
  int s = 16;    ///< intervals of s = |z|/r in [0, 1], endpoints included

  SphereDensity doubled() const { return {2 * phi, 2 * psi, 2 * s}; }
};

struct ModulusSample {
  double r = 0;
  double log_max = -std::numeric_limits<double>::infinity();  ///< natural log
  std::complex<double> z, w;                                  ///< where the max was seen
};

/// Lower bound for ln M_F(r) from the grid (r s e^{i phi}, r sqrt(1-s^2) e^{i psi}).
/// Doubling every density component gives a superset of points.
template <class Map>
ModulusSample sample_max_modulus(const Map& f, double r, const SphereDensity& d = {}) {
  if (d.phi < 32 || d.psi < 32 || d.s < 1)
    throw Error("sphere density must have >= 32 samples per angular dimension");
  ModulusSample best;
  best.r = r;
  std::vector<std::complex<double>> phis(static_cast<std::size_t>(d.phi));
  for (int a = 0; a < d.phi; ++a) phis[static_cast<std::size_t>(a)] = unit_root<double>(a, d.phi);
  for (int k = 0; k <= d.s; ++k) {
    const double s = double(k) / d.s;
    const double rz = r * s;
    const double rw = r * std::sqrt(std::max(0.0, 1.0 - s * s));
    for (int b = 0; b < d.psi; ++b) {
      const std::complex<double> w = rw * unit_root<double>(b, d.psi);
      const auto at = f.at(w);
      for (int a = 0; a < (k == 0 ? 1 : d.phi); ++a) {
        const std::complex<double> z = rz * phis[static_cast<std::size_t>(a)];
        const double v = f.log_norm(at, z);
        if (std::isnan(v)) throw Overflow("non-finite modulus sample at r=" + std::to_string(r));
        if (v > best.log_max) {
          best.log_max = v;
          best.z = z;
          best.w = w;
        }
      }
      if (k == d.s) break;  // w = 0 for every psi
    }
  }
  return best;
}

/// Adapts a plain callable (z, w) -> ln|F| to the sampling interface.
template <class Fn>
struct PointwiseMap {
  Fn fn;
  std::complex<double> at(std::complex<double> w) const { return w; }
  double log_norm(std::complex<double> w, std::complex<double> z) const { return fn(z, w); }
};
template <class Fn>
PointwiseMap<Fn> pointwise(Fn fn) {
  return {std::move(fn)};
}

struct GrowthFit {
  double c_fit = 0;
  double const_fit = 0;
  bool degenerate = false;  ///< growth flattens in log^2 (polynomial-type samples)
};

inline double log2p1(double r) {
  const double l = std::log(r + 1.0);
  return l * l;
}

/// Envelope ln M <= c L + b, L = ln^2(r+1), dominating every sample with the
/// least total gap sum_i (c L_i + b - ln M_i). The optimum is the edge of the
/// upper convex hull of (L_i, ln M_i) above the mean of L; at a hull vertex the
/// smaller slope is taken.
inline GrowthFit fit_growth(const std::vector<ModulusSample>& samples) {
  if (samples.size() < 2) throw Error("fit_growth needs at least 2 radii");
  struct P {
    double x, y;
  };
  std::vector<P> pts;
  for (const auto& s : samples) pts.push_back({log2p1(s.r), s.log_max});
  std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) { return a.x < b.x || (a.x == b.x && a.y > b.y); });
  // Upper hull (monotone chain), keeping the highest point for equal x.
  std::vector<P> hull;
  for (const auto& p : pts) {
    if (!hull.empty() && hull.back().x == p.x) continue;
    while (hull.size() >= 2) {
      const P& a = hull[hull.size() - 2];
      const P& b = hull.back();
      if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) >= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  GrowthFit fit;
  if (hull.size() == 1) {
    fit.c_fit = 0;
    fit.const_fit = hull[0].y;
    return fit;
  }
  double mean = 0;
  for (const auto& p : pts) mean += p.x;
  mean /= double(pts.size());
  std::size_t e = 0;
  while (e + 2 < hull.size() && hull[e + 1].x <= mean) ++e;
  fit.c_fit = (hull[e + 1].y - hull[e].y) / (hull[e + 1].x - hull[e].x);
  fit.const_fit = hull[e].y - fit.c_fit * hull[e].x;
  // Slopes in log^2 of a polynomial map decay like 1/log r: compare the
  // top octave of radii with the bottom one.
  const auto slope = [&](std::size_t i, std::size_t j) { return (pts[j].y - pts[i].y) / (pts[j].x - pts[i].x); };
  if (pts.size() >= 3) {
    const double lo = slope(0, 1);
    const double hi = slope(pts.size() - 2, pts.size() - 1);
    fit.degenerate = lo > 0 && hi < 0.5 * lo;
  }
  return fit;
}

/// Smallest b with ln M_i <= c L_i + b for all samples.
inline double offset_for_slope(const std::vector<ModulusSample>& samples, double c) {
  double b = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) b = std::max(b, s.log_max - c * log2p1(s.r));
  return b;
}

inline bool envelope_dominates(const std::vector<ModulusSample>& samples, const GrowthFit& fit, double slack = 1e-9) {
  for (const auto& s : samples)
    if (s.log_max > fit.c_fit * log2p1(s.r) + fit.const_fit + slack * (1 + std::abs(s.log_max))) return false;
  return true;
}

/// max of ln ln M / ln r over samples with r >= r_max / 10 (and ln M > 1).
inline double order_estimate(const std::vector<ModulusSample>& samples) {
  double rmax = 0;
  for (const auto& s : samples) rmax = std::max(rmax, s.r);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples)
    if (s.r >= rmax / 10 && s.r > 1 && s.log_max > 1) best = std::max(best, std::log(s.log_max) / std::log(s.r));
  return best;
}

struct GrowthReport {
  std::vector<ModulusSample> samples;
  SphereDensity density;
  GrowthFit fit;
  double order_estimate = 0;
};

template <class Map>
GrowthReport growth_report(const Map& f, const std::vector<double>& radii, const SphereDensity& d = {}) {
  if (radii.size() < 6) throw Error("growth fit needs >= 6 radii");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  if (*hi < 8 * *lo) throw Error("growth radii must span >= 3 octaves");
  GrowthReport rep;
  rep.density = d;
  for (double r : radii) rep.samples.push_back(sample_max_modulus(f, r, d));
  rep.fit = fit_growth(rep.samples);
  rep.order_estimate = order_estimate(rep.samples);
  return rep;
}

}  // namespace ordzero

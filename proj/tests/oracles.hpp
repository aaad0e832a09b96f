#pragma once

// Independent reference computations used only by the test suites.
// Nothing here calls into the evaluators under test.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace ordzero::oracle {

using cld = std::complex<long double>;

/// Plain product prod_{j=1..terms, j != skip} (1 - w/2^j) in long double.
inline cld brute_q(cld w, int terms = 64, int skip = 0) {
  cld acc = 1.0L;
  for (int j = 1; j <= terms; ++j)
    if (j != skip) acc *= (1.0L - w / std::ldexp(1.0L, j));
  return acc;
}

/// prod over explicit roots e^{2 pi i l/p}/j, roots built by cos/sin in long double.
inline cld brute_p(int period, int rate, cld z) {
  const long double tau = 6.283185307179586476925286766559L;
  cld acc = 1.0L;
  for (int j = 1; j <= rate; ++j)
    for (int l = 0; l < period; ++l)
      acc *= z - cld(std::cos(tau * l / period), std::sin(tau * l / period)) / (long double)j;
  return acc;
}

/// Central difference of a holomorphic function along the real axis.
inline std::complex<double> central_diff(const std::function<std::complex<double>(std::complex<double>)>& f,
                                         std::complex<double> z, double h = 1e-6) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

/// Fourth-order central difference in long double; usable next to critical
/// points where a double difference loses all digits to cancellation.
inline cld central_diff4(const std::function<cld(cld)>& f, cld z, long double h = 1e-5L) {
  return (f(z - 2 * h) - 8.0L * f(z - h) + 8.0L * f(z + h) - f(z + 2 * h)) / (12 * h);
}

inline double rel_err(std::complex<double> a, std::complex<double> b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0 ? 0.0 : std::abs(a - b) / s;
}

inline std::complex<double> random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

/// Cauchy transform (1/pi) sum_w g(w) h^2 / (z - w) of nodal data on a uniform grid,
/// evaluated at every node (the self term is dropped). Nodes are x0 + a h + i (y0 + b h),
/// index b n + a.
inline std::vector<std::complex<double>> cauchy_transform(const std::vector<std::complex<double>>& g, int n, double h,
                                                          double x0, double y0) {
  std::vector<std::pair<std::complex<double>, std::complex<double>>> support;
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) {
      const auto v = g[static_cast<std::size_t>(b) * n + a];
      if (v != std::complex<double>(0, 0)) support.emplace_back(std::complex<double>(x0 + a * h, y0 + b * h), v);
    }
  const double pi = 3.141592653589793;
  std::vector<std::complex<double>> out(g.size());
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) {
      const std::complex<double> z(x0 + a * h, y0 + b * h);
      std::complex<double> acc = 0;
      for (const auto& [w, v] : support)
        if (w != z) acc += v / (z - w);
      out[static_cast<std::size_t>(b) * n + a] = acc * (h * h / pi);
    }
  return out;
}

}  // namespace ordzero::oracle

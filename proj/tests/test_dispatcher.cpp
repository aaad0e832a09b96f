#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ordzero/dispatcher.hpp"

namespace ordzero {
namespace {

using cd = std::complex<double>;
using oracle::cld;

// 4 Q_2(0) / Q_2(4), frozen from a 50-digit product.
constexpr double kD2AtZero = -13.850986477820254;

cd brute_dispatcher(int m, double M, cd w) {
  const cld num = oracle::brute_q(cld(w), 100, m);
  const cld den = oracle::brute_q(std::ldexp(1.0L, m), 100, m);
  return cd((long double)M * num / den);
}

TEST(ExplicitDispatcher, NodeValues) {
  const auto d = build_explicit_dispatcher<double>(2, 4.0);
  EXPECT_EQ(d(cd(4, 0)), cd(4, 0));
  EXPECT_EQ(d(cd(8, 0)), cd(0, 0));
  EXPECT_NEAR(d(cd(0, 0)).real(), kD2AtZero, 1e-13);
  EXPECT_NEAR(brute_dispatcher(2, 4.0, cd(0, 0)).real(), kD2AtZero, 1e-14);
  EXPECT_EQ(to_string(d.kind()), std::string("explicit-product"));
}

TEST(ExplicitDispatcher, ExactInterpolationOverRange) {
  for (int m = 2; m <= 12; ++m) {
    const auto d = build_explicit_dispatcher<double>(m, double(m) * m, {}, false);
    for (int n = 1; n <= 20; ++n) {
      const cd v = d(cd(std::ldexp(1.0, n), 0));
      if (n == m)
        EXPECT_EQ(v, cd(double(m) * m, 0));
      else
        EXPECT_EQ(v, cd(0, 0)) << "m=" << m << " n=" << n;
    }
  }
}

TEST(ExplicitDispatcher, AgreesWithBruteProducts) {
  std::mt19937_64 rng(3);
  for (int m = 2; m <= 5; ++m) {
    const auto d = build_explicit_dispatcher<double>(m, double(m) * m, {}, false);
    for (int rep = 0; rep < 10; ++rep) {
      const cd w = oracle::random_point(rng, 80);
      EXPECT_LT(oracle::rel_err(d(w), brute_dispatcher(m, double(m) * m, w)), 1e-12);
      const auto f = [&](cd x) { return d(x); };
      EXPECT_LT(oracle::rel_err(d.deriv(w), oracle::central_diff(f, w, 1e-5)), 1e-6);
    }
  }
}

TEST(DispatcherSum, NodesAndOrigin) {
  const Schedule s({4, 8, 4}, {2, 2, 4}, 2);
  const auto ds = build_dispatchers<double>(s);
  for (int n : s.indices()) EXPECT_EQ(dispatcher_sum(ds, cd(std::ldexp(1.0, n), 0)), cd(1, 0));
  for (int n : {1, 5, 6, 9}) EXPECT_EQ(dispatcher_sum(ds, cd(std::ldexp(1.0, n), 0)), cd(0, 0));
  cd ref = 0;
  for (int m : s.indices()) ref += brute_dispatcher(m, double(m) * m, cd(0, 0)) / double(m * m);
  EXPECT_LT(oracle::rel_err(dispatcher_sum(ds, cd(0, 0)), ref), 1e-13);
}

TEST(DispatcherGrowth, SubPolynomial) {
  for (int m = 2; m <= 6; ++m) {
    const auto d = build_explicit_dispatcher<double>(m, double(m) * m);
    const auto& g = d.growth();
    ASSERT_EQ(g.samples.size(), 12u);
    EXPECT_TRUE(std::isfinite(g.fit.c_fit));
    EXPECT_TRUE(envelope_dominates(g.samples, g.fit));
    // ln M(r) / ln^2 r stays bounded; prod (1 + r/2^j) grows like
    // exp(ln^2 r / (2 ln 2)), and the lower-order terms shrink with r.
    EXPECT_LT(g.max_log_over_log2, 1.5);
    const auto& top = g.samples.back();
    EXPECT_LT(top.log_max / std::pow(std::log(top.r), 2), 1 / (2 * std::log(2.0)) + 0.3);
    EXPECT_TRUE(g.constant_depends_on_m);
  }
}

DbarConfig small_dbar() {
  DbarConfig c;
  c.grid_n = 192;
  c.box_half_width = 12;
  c.box_center = {0, 0};
  c.k_min = 2;
  c.k_max = 3;
  return c;
}

TEST(ValidateAgainstDbar, NodesAgree) {
  const auto v = validate_against_dbar(3, 9.0, small_dbar());
  ASSERT_EQ(v.nodes.size(), 2u);
  for (const auto& n : v.nodes) {
    EXPECT_EQ(n.explicit_value, cd(n.target, 0));
    EXPECT_LE(n.deviation, 1e-3 * 9);
  }
  EXPECT_LE(v.residual, 1e-8);
  EXPECT_TRUE(std::isfinite(v.numeric_fit.c_fit));
  EXPECT_TRUE(std::isfinite(v.explicit_fit.c_fit));
  EXPECT_THROW(validate_against_dbar(5, 25.0, small_dbar()), Error);
}

TEST(ValidateAgainstDbar, TwoIndexSet) {
  // Full box: nodes 2^3, 2^4 carry M and 2^5 stays near 0.
  const auto v = validate_against_dbar({3, 4}, 9.0, DbarConfig{});
  ASSERT_EQ(v.nodes.size(), 4u);
  for (const auto& n : v.nodes) {
    EXPECT_EQ(n.target, (n.k == 3 || n.k == 4) ? 9.0 : 0.0);
    EXPECT_LE(std::abs(n.numeric_value - n.target), 1e-3 * 9) << "k=" << n.k;
  }
  EXPECT_LE(v.max_node_deviation, 1e-3 * 9);
}

}  // namespace
}  // namespace ordzero

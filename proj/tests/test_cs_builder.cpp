#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ordzero/bigfloat.hpp"
#include "ordzero/cs_builder.hpp"
#include "ordzero/growth.hpp"

namespace ordzero {
namespace {

using cd = std::complex<double>;
using oracle::cld;

Schedule sample_schedule() { return Schedule({4, 8, 4}, {2, 2, 4}, 2); }

// g1 by plain long-double summation of brute products.
cld brute_g1(const Schedule& s, cld z, cld w) {
  cld acc = 0;
  for (int n : s.indices())
    acc += std::ldexp(1.0L, -s.exponent(n)) * oracle::brute_q(w, 80, n) * oracle::brute_p(s.period(n), s.rate(n), z);
  return acc;
}

TEST(BuildCs, SampleScheduleUnderDouble) {
  const auto cs = build_cs<double>(sample_schedule());
  EXPECT_EQ(cs.schedule().exponents(), (std::vector<int>{37, 101, 122}));
}

TEST(BuildCs, PrecisionOverflowUnderDouble) {
  const Schedule s({20}, {20}, 2);  // d = 40, l = 1601
  ASSERT_EQ(s.exponent(2), 1601);
  try {
    build_cs<double>(s);
    FAIL() << "expected PrecisionOverflow";
  } catch (const PrecisionOverflow& e) {
    EXPECT_EQ(e.level(), 2);
    EXPECT_GE(e.required_bits(), 1601);
  }
  ScopedPrecision prec(1700);
  const auto big = build_cs<BigReal>(s, TruncationPolicy::for_bits(1700), 1700);
  const auto z = big.lattice_z(2, 3, 5);
  const auto g = big.eval(z, Complex<BigReal>(BigReal(4), BigReal(0)));
  EXPECT_EQ(g.g1, Complex<BigReal>(0, 0));
  // Off the lattice g1 carries the 2^-1601 coefficient without flushing to 0.
  const auto a = big.at(Complex<BigReal>(BigReal(3), BigReal(0)));
  const double l2 = big.g1_scaled(a, Complex<BigReal>(BigReal(2), BigReal(0))).log2_abs();
  EXPECT_TRUE(std::isfinite(l2));
  EXPECT_LT(l2, -1000.0);
}

TEST(BuildCs, EmptySchedule) {
  const auto cs = build_cs<double>(Schedule({}, {}, 2));
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 5; ++rep) {
    const cd z = oracle::random_point(rng, 3), w = oracle::random_point(rng, 30);
    const auto g = cs.eval(z, w);
    EXPECT_EQ(g.g1, cd(0, 0));
    EXPECT_LT(oracle::rel_err(g.g2, cd(oracle::brute_q(cld(w), 80))), 1e-13);
  }
}

TEST(EvalG, VanishesOnLattice) {
  const auto cs = build_cs<double>(sample_schedule());
  for (const auto& c : check_zero_lattice(cs)) {
    EXPECT_EQ(c.abs_g1, 0.0) << "n=" << c.point.n << " j=" << c.point.j << " l=" << c.point.ell;
    EXPECT_EQ(c.abs_g2, 0.0);
    EXPECT_TRUE(c.ok());
  }
}

TEST(EvalG, OriginAgainstDirectSum) {
  const auto s = sample_schedule();
  const auto g = build_cs<double>(s).eval(cd(0, 0), cd(0, 0));
  long double ref = 0;
  for (int n : s.indices())
    ref += std::ldexp(1.0L, -s.exponent(n)) * oracle::brute_p(s.period(n), s.rate(n), 0.0L).real();
  EXPECT_LT(oracle::rel_err(g.g1, cd(double(ref), 0)), 1e-14);
  EXPECT_EQ(g.g2, cd(1, 0));
}

TEST(EvalG, RandomPointsAgainstBruteForce) {
  const auto s = sample_schedule();
  const auto cs = build_cs<double>(s);
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const cd z = oracle::random_point(rng, 2.0), w = oracle::random_point(rng, 40.0);
    const auto g = cs.eval(z, w);
    EXPECT_LT(oracle::rel_err(g.g1, cd(brute_g1(s, z, w))), 1e-12) << z << " " << w;
    EXPECT_LT(oracle::rel_err(g.g2, cd(oracle::brute_q(cld(w), 80))), 1e-12);
  }
}

TEST(EvalG, SecondComponentIgnoresZ) {
  const auto cs = build_cs<double>(sample_schedule());
  std::mt19937_64 rng(6);
  const cd w(7.25, -3.5);
  const auto a = cs.at(w);
  const cd g2 = cs.eval(a, cd(0, 0)).g2;
  for (int rep = 0; rep < 10; ++rep) EXPECT_EQ(cs.eval(a, oracle::random_point(rng, 5)).g2, g2);
}

TEST(EvalG, ProductTruncationHonesty) {
  // Compared in 256-bit arithmetic so that roundoff sits far below the tail.
  ScopedPrecision prec(256);
  const auto s = sample_schedule();
  const auto coarse = TruncationPolicy::from_eps(1e-10);
  const auto cs = build_cs<BigReal>(s, coarse, 256);
  const auto fine = build_cs<BigReal>(s, TruncationPolicy::for_bits(256), 256);
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const cd zd = oracle::random_point(rng, 1.5), wd = oracle::random_point(rng, 100);
    const Complex<BigReal> z(zd.real(), zd.imag()), w(wd.real(), wd.imag());
    const auto a = cs.eval(z, w);
    const auto b = fine.eval(z, w);
    EXPECT_LE(static_cast<double>(abs(a.g1 - b.g1)) + static_cast<double>(abs(a.g2 - b.g2)), a.tail_bound);
  }
}

TEST(EvalG, SeriesTermBoundCoversNextLevel) {
  // Adding the next scheduled level moves g1 by less than the a-priori term bound.
  const Schedule full({4, 8, 4}, {2, 2, 4}, 2);
  const Schedule prefix({4, 8}, {2, 2}, 2);
  const auto a = build_cs<double>(full), b = build_cs<double>(prefix);
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const cd z = oracle::random_point(rng, 4.0), w = oracle::random_point(rng, 500.0);
    const double diff = std::abs(a.eval(z, w).g1 - b.eval(z, w).g1);
    const double bound = std::exp2(log2_term_bound(4, full.rate(4), full.exponent(4), std::abs(z), std::abs(w)));
    EXPECT_LE(diff, bound);
  }
}

TEST(Jacobian, RotationCovarianceOnLattice) {
  const auto s = sample_schedule();
  const auto cs = build_cs<double>(s);
  for (int n : s.indices()) {
    const auto a = cs.at(cd(std::ldexp(1.0, n), 0));
    const int p = s.period(n);
    for (int j = 1; j <= s.rate(n); ++j) {
      const cd d0 = cs.jacobian(a, cs.lattice_z(n, j, 0)).d1dz.value();
      ASSERT_NE(d0, cd(0, 0));
      for (int l = 0; l < p; ++l) {
        const auto d = cs.jacobian(a, cs.lattice_z(n, j, l));
        EXPECT_LT(oracle::rel_err(d.d1dz.value(), unit_root<double>(-l, p) * d0), 1e-10);
        EXPECT_TRUE(d.d2dz.is_zero());
        EXPECT_NE(d.d2dw.value(), cd(0, 0));
      }
    }
  }
}

TEST(Jacobian, SurvivingTermOnLattice) {
  // At (z, 2^n) only the n-th term of d g1/dz survives: 2^-l_n Q_n(2^n) P_n'(z).
  const auto s = sample_schedule();
  const auto cs = build_cs<double>(s);
  for (int n : s.indices()) {
    const cd w(std::ldexp(1.0, n), 0);
    const cd z = cs.lattice_z(n, 1, 0);
    const cd expect = std::ldexp(1.0, -s.exponent(n)) * eval_Qn<double>(n, w) * eval_Pn_deriv<double>(s, n, z);
    EXPECT_LT(oracle::rel_err(cs.jacobian(z, w).d1dz.value(), expect), 1e-13);
    EXPECT_LT(oracle::rel_err(cs.jacobian(z, w).d2dw.value(), eval_Q_deriv<double>(w)), 1e-15);
  }
}

TEST(Jacobian, FiniteDifferenceOracle) {
  const auto cs = build_cs<double>(sample_schedule());
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    const cd z = oracle::random_point(rng, 1.5), w = oracle::random_point(rng, 20.0);
    const auto d = cs.jacobian(z, w);
    const auto g1z = [&](cd x) { return cs.eval(x, w).g1; };
    const auto g1w = [&](cd x) { return cs.eval(z, x).g1; };
    const auto g2w = [&](cd x) { return cs.eval(z, x).g2; };
    EXPECT_LT(oracle::rel_err(d.d1dz.value(), oracle::central_diff(g1z, z)), 1e-5);
    EXPECT_LT(oracle::rel_err(d.d1dw.value(), oracle::central_diff(g1w, w)), 1e-5);
    EXPECT_LT(oracle::rel_err(d.d2dw.value(), oracle::central_diff(g2w, w)), 1e-5);
    const auto g2z = [&](cd x) { return cs.eval(x, w).g2; };
    EXPECT_EQ(oracle::central_diff(g2z, z), cd(0, 0));
  }
}

TEST(ZeroLattice, LevelGeometry) {
  const auto cs = build_cs<double>(sample_schedule());
  const auto pts = cs.zero_lattice();
  std::size_t level2 = 0;
  for (const auto& pt : pts) {
    EXPECT_LE(norm2(pt.z, pt.w), std::ldexp(1.0, pt.n) + 1);
    EXPECT_EQ(pt.w, cd(std::ldexp(1.0, pt.n), 0));
    if (pt.n == 2) {
      ++level2;
      EXPECT_NEAR(std::abs(pt.z), 1.0 / pt.j, 1e-16);
      EXPECT_TRUE(pt.j == 1 || pt.j == 2);
    }
  }
  EXPECT_EQ(level2, 8u);
  // Enumeration oracle: sum m_n p_n.
  EXPECT_EQ(cs.zero_lattice_original().size(), 4u * 2 + 8u * 2 + 4u * 4);
  EXPECT_EQ(cs.zero_lattice_original().size(), 40u);
  EXPECT_EQ(pts.size(), 4u * 2 + 8u * 2 + 4u * 7);
}

TEST(ZeroLattice, RotationInvariant) {
  const auto cs = build_cs<double>(sample_schedule());
  for (int n : cs.schedule().indices()) {
    const int p = cs.schedule().period(n);
    std::set<std::pair<int, int>> labels;
    for (int j = 1; j <= cs.schedule().rate(n); ++j)
      for (int l = 0; l < p; ++l) {
        const cd rotated = unit_root<double>(1, p) * cs.lattice_z(n, j, l);
        const cd target = cs.lattice_z(n, j, (l + 1) % p);
        EXPECT_LT(std::abs(rotated - target), 1e-15);
        labels.insert({j, (l + 1) % p});
      }
    EXPECT_EQ(labels.size(), static_cast<std::size_t>(cs.schedule().factor_count(n)));
  }
}

TEST(Growth, LogSquareEnvelopeAtLowDensity) {
  const auto cs = build_cs<double>(sample_schedule());
  std::vector<ModulusSample> samples;
  for (int k = 1; k <= 10; ++k) samples.push_back(sample_max_modulus(cs, std::ldexp(1.0, k), {32, 32, 8}));
  const double c = offset_for_slope(samples, 40.0);
  EXPECT_TRUE(std::isfinite(c));
  for (const auto& s : samples) EXPECT_LE(s.log_max, 40 * log2p1(s.r) + c + 1e-9);
  const auto fit = fit_growth(samples);
  EXPECT_LE(fit.c_fit, 40.0);
}

}  // namespace
}  // namespace ordzero

#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ordzero/subharmonic.hpp"

namespace ordzero {
namespace {

using cd = std::complex<double>;

std::vector<double> boundary(int n, const std::function<double(cd)>& f) {
  std::vector<double> b(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) b[static_cast<std::size_t>(k)] = f(std::polar(1.0, 2 * M_PI * k / n));
  return b;
}

std::shared_ptr<const BasePotential> log_squared_base() { return std::make_shared<LogSquaredBase>(default_C()); }

const PuncturedPotential& punctured_v() {
  static const PuncturedPotential v = puncture(log_squared_base(), 2, 6);
  return v;
}

GridSpec acceptance_grid() { return {2.5, 73, -9, 9, 0.125}; }

TEST(PoissonIntegral, ReproducesHarmonicData) {
  const auto one = boundary(256, [](cd) { return 1.0; });
  EXPECT_NEAR(poisson_integral(one, cd(0.3, -0.4)), 1.0, 1e-14);
  const auto re = boundary(512, [](cd z) { return z.real(); });
  EXPECT_NEAR(poisson_integral(re, cd(0.3, 0.2)), 0.3, 1e-14);
  // Re(z^3) = r^3 cos 3t.
  const auto cube = boundary(512, [](cd z) { return std::pow(z, 3).real(); });
  const cd p(0.5, 0.4);
  EXPECT_NEAR(poisson_integral(cube, p), std::pow(p, 3).real(), 1e-13);
}

TEST(PoissonIntegral, Underresolved) {
  const auto b = boundary(256, [](cd) { return 1.0; });
  EXPECT_THROW(poisson_integral(b, cd(0.95, 0)), QuadratureUnderresolved);
  EXPECT_THROW(poisson_integral(boundary(128, [](cd) { return 1.0; }), cd(0, 0)), QuadratureUnderresolved);
  EXPECT_THROW(poisson_integral(b, cd(1, 0)), QuadratureUnderresolved);
}

TEST(GreenPotential, ConstantLaplacian) {
  // u = |z|^2 - 1 has Delta u = 4 and vanishes on the circle.
  const auto four = [](cd) { return 4.0; };
  EXPECT_NEAR(green_potential(four, cd(0, 0)), -1.0, 1e-6);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(0, 0.9), t(0, 2 * M_PI);
  for (int rep = 0; rep < 8; ++rep) {
    const cd z = std::polar(r(rng), t(rng));
    EXPECT_NEAR(green_potential(four, z), std::norm(z) - 1, 1e-6) << z;
  }
  EXPECT_EQ(green_potential([](cd) { return 0.0; }, cd(0.2, 0.1)), 0.0);
}

TEST(GreenPotential, RieszDecomposition) {
  // u = |z|^4: Delta u = 16 |z|^2, u = P_D u + G[Delta u] with P_D u = 1.
  const auto lap = [](cd w) { return 16 * std::norm(w); };
  for (cd z : {cd(0, 0), cd(0.5, 0.1), cd(-0.2, 0.7)})
    EXPECT_NEAR(1 + green_potential(lap, z), std::pow(std::norm(z), 2), 1e-6);
}

TEST(EstimateC, BoundaryLimitIsOneHalf) {
  // iint_D P(xi, y) dA(y) / 2pi tends to 1/2 as the evaluation point reaches the circle.
  const double c = estimate_c();
  EXPECT_GT(c, 0);
  EXPECT_NEAR(c, 0.5, 1e-12);
  EXPECT_NEAR(estimate_c(8, 4, 32), c, 1e-12);
  EXPECT_NEAR(default_C(), 1024.0, 1e-8);
}

TEST(LogSquaredBase, PiecewiseDefinition) {
  const LogSquaredBase u(1024);
  EXPECT_EQ(u.value(cd(0, 0)), kNegInfSentinel);
  EXPECT_NEAR(u.value(cd(1.5, 0)), 1024 * std::log(1.5), 1e-12);
  EXPECT_NEAR(u.value(cd(2.5, 0)), 1024 * std::log(2.5), 1e-12);  // log r > log^2 r below e
  EXPECT_NEAR(u.value(cd(0, 10)), 1024 * std::pow(std::log(10.0), 2), 1e-9);
  EXPECT_EQ(u.laplacian(cd(2, 0)), 0.0);
  EXPECT_NEAR(u.laplacian(cd(4, 0)), 2 * 1024 / 16.0, 1e-12);
  EXPECT_THROW(LogSquaredBase(1.0), Error);
}

TEST(LogSquaredBase, LaplacianMatchesDifferences) {
  const LogSquaredBase u(1024);
  const double h = 1e-3;
  for (cd z : {cd(4, 0), cd(10, 3), cd(-30, 17)}) {
    const double lap = (u.value(z + h) + u.value(z - h) + u.value(z + cd(0, h)) + u.value(z - cd(0, h)) - 4 * u.value(z)) / (h * h);
    EXPECT_NEAR(lap, u.laplacian(z), 1e-4 * u.laplacian(z) + 1e-5);
  }
}

TEST(Puncture, StrengthsAndDisks) {
  const auto& v = punctured_v();
  ASSERT_EQ(v.disks().size(), 5u);
  for (const auto& d : v.disks()) {
    EXPECT_EQ(d.center, cd(std::ldexp(1.0, d.k), 0));
    EXPECT_EQ(d.radius, std::ldexp(1.0, d.k - 3));
    // c r^2 2C / (2^k + r)^2 = 2cC / 81.
    EXPECT_NEAR(d.A, 2 * 0.5 * 1024 / 81.0, 1e-9);
  }
  EXPECT_THROW(puncture(log_squared_base(), 1, 3), Error);
  EXPECT_THROW(PuncturedPotential(log_squared_base(), {{2, cd(4, 0), 1, 1}, {3, cd(5, 0), 1, 1}}), Error);
}

TEST(Puncture, OutsideDisksEqualsBase) {
  const auto& v = punctured_v();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(-80, 80);
  int outside = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const cd z(x(rng), x(rng) / 8);
    if (v.disk_of(z) >= 0) continue;
    ++outside;
    EXPECT_EQ(v.value(z), v.base().value(z));
  }
  EXPECT_GT(outside, 100);
}

TEST(Puncture, SentinelAtCentres) {
  const auto& v = punctured_v();
  for (const auto& d : v.disks()) {
    const auto e = v.eval(d.center);
    EXPECT_TRUE(e.neg_inf);
    EXPECT_EQ(e.value, kNegInfSentinel);
  }
  EXPECT_TRUE(v.eval(cd(0, 0)).neg_inf);
  EXPECT_FALSE(v.eval(cd(4.01, 0)).neg_inf);
}

TEST(Puncture, ContinuousAcrossBoundary) {
  const auto& v = punctured_v();
  for (std::size_t i = 0; i < v.disks().size(); ++i) {
    const auto& d = v.disks()[i];
    for (int a = 0; a < 64; ++a) {
      const cd xi = d.center + d.radius * unit_root<double>(a, 64);
      EXPECT_NEAR(v.inner(i, xi).value, v.base().value(xi), 1e-9 * std::abs(v.base().value(xi)));
    }
  }
}

TEST(Puncture, HarmonicPartMatchesPoissonIntegral) {
  const auto& v = punctured_v();
  const auto& d = v.disks()[1];
  for (cd zeta : {cd(0, 0), cd(0.3, 0.1), cd(-0.5, 0.6)}) {
    const double ref = poisson_integral(v.boundary_samples(1), zeta);
    const double got = v.inner(1, d.center + d.radius * zeta).value - d.A * std::log(std::abs(zeta));
    if (zeta == cd(0, 0)) continue;
    EXPECT_NEAR(got, ref, 1e-9 * std::abs(ref));
  }
}

TEST(Puncture, SubMeanValueProperty) {
  // v(z) <= mean of v on any circle around z.
  const auto& v = punctured_v();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(3.5, 72), y(-8, 8), r(0.05, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const cd z(x(rng), y(rng));
    const double rad = r(rng);
    double mean = 0;
    const int n = 2048;
    for (int a = 0; a < n; ++a) mean += v.value(z + rad * unit_root<double>(a, n));
    mean /= n;
    const double vz = v.value(z);
    EXPECT_LE(vz, mean + 1e-7 * std::abs(mean)) << "z=" << z << " r=" << rad;
  }
}

TEST(Subharmonic, BaseAlonePasses) {
  const PuncturedPotential plain(log_squared_base(), {});
  const auto rep = verify_subharmonic(plain, acceptance_grid());
  EXPECT_TRUE(rep.ok());
  EXPECT_GT(rep.points_checked, 80000);
  EXPECT_TRUE(rep.max_jump_per_disk.empty());
}

TEST(Subharmonic, JumpHasCorrectSign) {
  const auto rep = check_subharmonic(punctured_v(), acceptance_grid());
  ASSERT_EQ(rep.max_jump_per_disk.size(), 5u);
  for (double j : rep.max_jump_per_disk) EXPECT_LT(j, 0.0);
  EXPECT_TRUE(rep.jump_ok());
}

TEST(Subharmonic, AwayFromCentresPasses) {
  // The 5-point Laplacian of A log|z - z_k| is exact only far from z_k;
  // beyond ~9 steps its truncation error stays inside 10 h^2.
  SubharmonicOptions opt;
  opt.exclusion_steps = 9;
  const auto rep = verify_subharmonic(punctured_v(), acceptance_grid(), opt);
  EXPECT_TRUE(rep.ok());
}

TEST(Subharmonic, NearCentreTruncationError) {
  // At 2 steps on the axis the stencil of log|z| gives about -0.0646 / h^2.
  const auto rep = check_subharmonic(punctured_v(), acceptance_grid());
  const double A = punctured_v().disks()[0].A, h = 0.125;
  EXPECT_NEAR(rep.min_laplacian, -0.0646 * A / (h * h), 0.01 * A / (h * h));
  EXPECT_GT(rep.min_laplacian_over_C, -0.1);
}

TEST(Subharmonic, OverStrongPuncturesAreRejected) {
  const auto strong = punctured_v().with_strength(1e6);
  EXPECT_THROW(verify_subharmonic(strong, acceptance_grid(), {.exclusion_steps = 9}), SubharmonicityViolation);
  const auto rep = check_subharmonic(strong, acceptance_grid(), {.exclusion_steps = 9});
  EXPECT_FALSE(rep.jump_ok());
  EXPECT_FALSE(rep.offenders.empty());
}

TEST(Subharmonic, ConstantLaplacianBase) {
  // u = |z|^2: A_k = 4 c r_k^2, so the stencil error near z_k grows with k.
  auto base = std::make_shared<QuadraticBase>(1.0);
  const auto v = puncture(base, 2, 5);
  for (const auto& d : v.disks()) EXPECT_NEAR(d.A, 4 * 0.5 * d.radius * d.radius, 1e-12);
  const auto rep = check_subharmonic(v, {2.5, 37, -5, 5, 0.125}, {.exclusion_steps = 16});
  EXPECT_TRUE(rep.ok()) << describe(rep.offenders);
  for (double j : rep.max_jump_per_disk) EXPECT_LT(j, 0.0);
}

TEST(PunctureBound, DyadicLevels) {
  const auto& v = punctured_v();
  for (std::size_t i = 0; i < v.disks().size(); ++i)
    for (double delta : {0.5, 0.25, 0.125}) {
      const auto b = puncture_bound(v, i, delta);
      EXPECT_TRUE(b.ok()) << "k=" << b.k << " delta=" << delta << " max=" << b.max_v << " bound=" << b.bound;
      const auto l = majorant_bound(v, i, delta);
      EXPECT_LE(l.max_v, l.bound + 1e-9 * std::abs(l.bound));
    }
}

}  // namespace
}  // namespace ordzero

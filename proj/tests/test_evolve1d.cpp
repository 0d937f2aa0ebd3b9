#include <gtest/gtest.h>

#include "splinewave/evolve1d.hpp"
#include "splinewave/fixtures.hpp"
#include "splinewave/oracle.hpp"

using namespace splinewave;

namespace {

std::vector<std::pair<std::string, Spline1D>> line_fixtures(double a = 1.0) {
  return {{"square", fixtures::square(a)},
          {"triangle", fixtures::triangle(a)},
          {"trapezium", fixtures::trapezium(a)},
          {"smooth-hump", fixtures::smooth_hump(a)},
          {"truncated-quadratic", fixtures::truncated_quadratic(a)}};
}

}  // namespace

TEST(FreeEvolution, SquareIsDifferenceOfStepKernels) {
  const double a = 0.8;
  const auto f = evolvable_form(fixtures::square(a));
  const PhysicalUnits u;
  for (double t : {0.05, 0.5, 2.0})
    for (double x : {-3.0, -0.8, 0.0, 0.4, 2.2}) {
      const cplx want = chi_n(0, x + a, t, u) - chi_n(0, x - a, t, u);
      EXPECT_LT(std::abs(evolve_free(f, x, t, u) - want), 1e-15);
    }
}

TEST(FreeEvolution, TriangleAndTruncatedQuadraticKernels) {
  const double a = 1.1;
  const PhysicalUnits u;
  const auto tri = evolvable_form(fixtures::triangle(a));
  const auto tq = evolvable_form(fixtures::truncated_quadratic(a));
  for (double x : {-2.0, 0.0, 0.7}) {
    const double t = 0.3;
    const cplx want_tri = (chi_n(1, x + a, t, u) - 2.0 * chi_n(1, x, t, u) + chi_n(1, x - a, t, u)) / a;
    EXPECT_LT(std::abs(evolve_free(tri, x, t, u) - want_tri), 1e-14);
    const cplx want_tq = 2.0 / (a * a) *
                         (a * chi_n(1, x + a, t, u) - chi_n(2, x + a, t, u) + chi_n(2, x - a, t, u) +
                          a * chi_n(1, x - a, t, u));
    EXPECT_LT(std::abs(evolve_free(tq, x, t, u) - want_tq), 1e-14);
  }
}

TEST(FreeEvolution, MatchesPropagatorQuadrature) {
  const PhysicalUnits u;
  for (const auto& [name, s] : line_fixtures()) {
    const auto f = evolvable_form(s);
    for (double t : {0.1, 1.0})
      for (int k = 0; k < 25; ++k) {
        const double x = -4.0 + 8.0 * k / 24.0;
        const auto q = oracle::quadrature_evolve_free(s, x, t, u);
        EXPECT_LT(q.error, 1e-10);
        EXPECT_LT(std::abs(evolve_free(f, x, t, u) - q.value), 1e-8) << name << " t=" << t << " x=" << x;
      }
  }
}

TEST(FreeEvolution, NonUnitMassAndHbar) {
  const PhysicalUnits u(2.5, 0.4);
  const auto s = fixtures::smooth_hump(0.9);
  const auto f = evolvable_form(s);
  for (double x : {-1.5, 0.1, 2.0}) {
    const auto q = oracle::quadrature_evolve_free(s, x, 0.7, u);
    EXPECT_LT(std::abs(evolve_free(f, x, 0.7, u) - q.value), 1e-8);
  }
}

TEST(FreeEvolution, InitialValueAndSmallTime) {
  for (const auto& [name, s] : line_fixtures()) {
    const auto f = evolvable_form(s);
    for (int k = 1; k < 200; ++k) {
      const double x = s.left() + s.extent() * k / 200.0;
      EXPECT_LT(std::abs(evolve_free(f, x, 0.0) - s(x)), 1e-13) << name;
      EXPECT_LT(std::abs(evolve_free(f, x, 1e-13) - s(x)), 1e-6) << name;
    }
  }
}

TEST(FreeEvolution, RejectsBadTime) {
  const auto f = evolvable_form(fixtures::square());
  EXPECT_THROW(evolve_free(f, 0.0, -0.1), domain_error);
  EXPECT_THROW(evolve_free(f, std::nan(""), 0.1), domain_error);
}

TEST(FreeEvolution, SolvesSchroedinger) {
  const auto f = evolvable_form(fixtures::smooth_hump());
  const auto rep = oracle::schrodinger_residual([&](double x, double t) { return evolve_free(f, x, t); },
                                                oracle::ResidualRegion{}, {0.04, 0.02, 0.01});
  ASSERT_EQ(rep.orders.size(), 2u);
  for (double o : rep.orders) EXPECT_NEAR(o, 2.0, 0.2);
}

TEST(FreeEvolution, ResidualNegativeControl) {
  const auto f = evolvable_form(fixtures::smooth_hump());
  const auto rep = oracle::schrodinger_residual(
      [&](double x, double t) { return evolve_free(f, x, t) + 0.01 * x * x; }, oracle::ResidualRegion{},
      {0.04, 0.02, 0.01});
  EXPECT_GT(rep.max_residual.back(), 5e-3);
  for (double o : rep.orders) EXPECT_LT(o, 1.0);
}

TEST(FreeEvolution, ConservesNorm) {
  const auto s = fixtures::triangle();
  const double n0 = moments(s).norm2;
  for (double t : {0.2, 1.0}) EXPECT_NEAR(oracle::evolved_norm_1d(evolvable_form(s), t) / n0, 1.0, 1e-6);
  const auto sq = fixtures::square();
  EXPECT_NEAR(oracle::evolved_norm_1d(evolvable_form(sq), 0.5) / 2.0, 1.0, 1e-6);
}

TEST(Fourier, ClosedForms) {
  const double a = 1.3;
  const auto sq = evolvable_form(fixtures::square(a));
  const auto tri = evolvable_form(fixtures::triangle(a));
  const auto hump = evolvable_form(fixtures::smooth_hump(a));
  const auto tq = evolvable_form(fixtures::truncated_quadratic(a));
  const double r2 = std::sqrt(2 / pi), r8 = std::sqrt(8 / pi);
  for (double k : {-7.3, -2.0, -0.4, 0.05, 0.9, 3.1, 11.0}) {
    const double ka = k * a;
    EXPECT_LT(std::abs(fourier_transform(sq, k) - r2 * std::sin(ka) / k), 1e-13);
    // height 1, base 2a
    EXPECT_LT(std::abs(fourier_transform(tri, k) - r2 * (1 - std::cos(ka)) / (a * k * k)), 1e-13);
    EXPECT_LT(std::abs(fourier_transform(tq, k) - r8 * (std::sin(ka) - ka * std::cos(ka)) / (a * a * k * k * k)),
              1e-12);
    EXPECT_LT(std::abs(fourier_transform(hump, k) - r8 * std::sin(ka) * (1 - std::cos(ka)) / (a * a * k * k * k)),
              1e-12);
  }
}

TEST(Fourier, FiniteAtZero) {
  for (const auto& [name, s] : line_fixtures(1.7)) {
    const auto f = evolvable_form(s);
    const cplx at0 = fourier_transform(f, 0.0);
    EXPECT_TRUE(detail::all_finite(at0));
    EXPECT_LT(std::abs(at0 - oracle::numerical_fourier(s, 0.0)), 1e-14) << name;
    EXPECT_LT(std::abs(fourier_transform(f, 1e-9) - at0), 1e-8) << name;
  }
}

TEST(Fourier, MatchesSegmentOracle) {
  for (const auto& [name, s] : line_fixtures()) {
    const auto f = evolvable_form(s);
    for (int q = 0; q <= 200; ++q) {
      const double k = -20.0 + 40.0 * q / 200.0;
      EXPECT_LT(std::abs(fourier_transform(f, k) - oracle::numerical_fourier(s, k)), 1e-10) << name << " k=" << k;
    }
  }
}

TEST(Fourier, ShiftedAndComplexSplines) {
  const auto s = build_spline({2.0, 2.5, 3.7, 4.1}, {0.0, {1.0, 0.5}, {-0.3, 2.0}, 0.0}, 1);
  const auto f = evolvable_form(s);
  for (double k : {-9.0, -0.6, 0.0, 0.3, 1.9, 25.0})
    EXPECT_LT(std::abs(fourier_transform(f, k) - oracle::numerical_fourier(s, k)), 1e-12) << k;
}

TEST(Asymptote, SquareFarField) {
  const double a = 1.0;
  const auto w = asymptotic_wave(fixtures::square(a));
  for (double t : {0.5, 3.0})
    for (double x : {-2.0, 0.3, 1.7}) {
      const double sigma = t / (a * a);
      const double u = x / (a * sigma);
      const cplx want = std::sqrt(2.0 / (I * pi * sigma)) * std::exp(I * x * x / (2 * a * a * sigma)) * std::sin(u) / u;
      EXPECT_LT(std::abs(w(x, t) - want), 1e-13);
    }
}

TEST(Asymptote, ModulusEvenForSymmetricSpline) {
  const auto w = asymptotic_wave(fixtures::smooth_hump());
  for (double x : {0.4, 1.3, 5.0}) EXPECT_NEAR(std::abs(w(x, 1.5)), std::abs(w(-x, 1.5)), 1e-14);
  EXPECT_THROW(w(0.0, 0.0), domain_error);
}

TEST(Asymptote, CentresOnMeanPosition) {
  // the far field of a shifted triangle is the shifted far field
  const auto base = asymptotic_wave(fixtures::triangle());
  const auto moved = asymptotic_wave(build_spline({2.0, 3.0, 4.0}, {0.0, 1.0, 0.0}, 1));
  EXPECT_NEAR(moved.mean_x(), 3.0, 1e-14);
  for (double x : {-1.0, 0.5, 2.0}) EXPECT_LT(std::abs(moved(x + 3.0, 2.0) - base(x, 2.0)), 1e-13);
}

TEST(Asymptote, GapDecreasesWithTime) {
  for (const auto& [name, s] : line_fixtures()) {
    double prev = 1e300;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      const auto g = oracle::asymptotic_gap(s, t);
      EXPECT_LT(g.complex_gap, prev) << name << " t=" << t;
      // unitarity makes the sampled gap equal the closed identity
      EXPECT_NEAR(g.complex_gap, g.identity_gap, 1e-4) << name << " t=" << t;
      prev = g.complex_gap;
    }
  }
}

TEST(Oscillator, RequiresFirstQuarterPeriod) {
  const PhysicalUnits u(1.0, 1.0, 2.0);
  const auto f = evolvable_form(fixtures::square());
  EXPECT_THROW(evolve_oscillator(f, 0.0, pi / 4, u), caustic_error);
  EXPECT_THROW(evolve_oscillator(f, 0.0, 1.0, u), caustic_error);
  EXPECT_THROW(evolve_oscillator(f, 0.0, -0.1, u), domain_error);
  EXPECT_NO_THROW(evolve_oscillator(f, 0.0, 0.7, u));
}

TEST(Oscillator, InitialValue) {
  const PhysicalUnits u(1.0, 1.0, 1.5);
  const auto s = fixtures::triangle();
  const auto f = evolvable_form(s);
  for (double x : {-0.5, 0.0, 0.8}) EXPECT_LT(std::abs(evolve_oscillator(f, x, 0.0, u) - s(x)), 1e-14);
}

TEST(Oscillator, SquareClosedFormAndKernel) {
  const double a = 1.0;
  const auto s = fixtures::square(a);
  const auto f = evolvable_form(s);
  const PhysicalUnits u(1.0, 1.0, 1.0);
  for (double wt : {0.3, 0.6, 1.2})
    for (double x : {-2.5, -0.6, 0.0, 1.1, 3.0}) {
      const cplx closed = oracle::square_in_oscillator(a, x, wt, u);
      const cplx mapped = evolve_oscillator(f, x, wt, u);
      const auto quad = oracle::quadrature_evolve_oscillator(s, x, wt, u);
      EXPECT_LT(std::abs(closed - mapped), 1e-7) << "wt=" << wt << " x=" << x;
      EXPECT_LT(std::abs(closed - quad.value), 1e-7) << "wt=" << wt << " x=" << x;
    }
}

TEST(Oscillator, WeakTrapReducesToFree) {
  const auto f = evolvable_form(fixtures::smooth_hump());
  const PhysicalUnits weak(1.0, 1.0, 1e-6), free;
  for (double x : {-2.0, 0.0, 1.3}) EXPECT_LT(std::abs(evolve_oscillator(f, x, 0.3, weak) - evolve_free(f, x, 0.3, free)), 1e-5);
  // omega = 0 is the free problem itself
  EXPECT_EQ(evolve(f, 0.7, 0.3, free), evolve_free(f, 0.7, 0.3, free));
}

TEST(Oscillator, SolvesTrappedSchroedinger) {
  const PhysicalUnits u(1.0, 1.0, 1.0);
  const auto f = evolvable_form(fixtures::triangle());
  const auto rep = oracle::schrodinger_residual([&](double x, double t) { return evolve_oscillator(f, x, t, u); },
                                                oracle::ResidualRegion{}, {0.04, 0.02, 0.01}, u);
  for (double o : rep.orders) EXPECT_NEAR(o, 2.0, 0.2);
}

TEST(Oscillator, KernelReducesToFreeKernel) {
  const auto s = fixtures::triangle();
  const PhysicalUnits weak(1.0, 1.0, 1e-6);
  for (double x : {-1.0, 0.5}) {
    const cplx osc = oracle::quadrature_evolve_oscillator(s, x, 0.4, weak).value;
    const cplx fr = oracle::quadrature_evolve_free(s, x, 0.4).value;
    EXPECT_LT(std::abs(osc - fr), 1e-6 * std::abs(fr));
  }
}

TEST(Radial, InitialProfile) {
  for (const auto& r : {fixtures::cubic_radial(1.2), fixtures::cone_radial(1.2)}) {
    const auto f = evolvable_form(odd_extension(r));
    for (double rr : {0.1, 0.6, 1.1}) EXPECT_LT(std::abs(evolve_radial(f, rr, 0.0) - r(rr)), 1e-14);
    EXPECT_THROW(evolve_radial(f, 0.0, 0.1), domain_error);
    EXPECT_THROW(evolve_radial(f, -0.2, 0.1), domain_error);
  }
}

TEST(Radial, MatchesQuadratureOfOddExtension) {
  for (const auto& r : {fixtures::cubic_radial(), fixtures::cone_radial()}) {
    const auto odd = odd_extension(r);
    const auto f = evolvable_form(odd);
    for (double t : {0.1, 0.5})
      for (double rr : {0.05, 0.5, 1.4, 3.0}) {
        const cplx q = oracle::quadrature_evolve_free(odd, rr, t).value / rr;
        EXPECT_LT(std::abs(evolve_radial(f, rr, t) - q), 1e-8);
      }
  }
}

TEST(Radial, FiniteAtOrigin) {
  const auto f = evolvable_form(odd_extension(fixtures::cone_radial()));
  const cplx near0 = evolve_radial(f, 1e-12, 0.3);
  EXPECT_TRUE(detail::all_finite(near0));
  EXPECT_LT(std::abs(near0 - evolve_radial(f, 1e-4, 0.3)), 1e-6);
}

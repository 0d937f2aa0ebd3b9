#include <gtest/gtest.h>

#include <random>

#include "splinewave/fixtures.hpp"
#include "splinewave/oracle.hpp"

using namespace splinewave;

namespace {

// Free square on (-a, a) from the Fresnel integrals alone.
cplx square_free(double a, double x, double t, const PhysicalUnits& u = {}) {
  const double L = std::sqrt(pi * u.hbar() * t / u.m());
  const auto lo = fresnel((-a - x) / L), hi = fresnel((a - x) / L);
  return cplx{hi.C - lo.C, hi.S - lo.S} / std::sqrt(2.0 * I);
}

cplx gaussian_free(double x, double t) {
  const cplx s = 1.0 + I * t;
  return std::exp(-x * x / (2.0 * s)) / std::sqrt(s);
}

}  // namespace

TEST(QuadratureOracle, SquareMatchesFresnelClosedForm) {
  const auto sq = fixtures::square();
  for (double x : {0.0, 0.4, 1.0, 2.5}) {
    const auto q = oracle::quadrature_evolve_free(sq, x, 0.5);
    EXPECT_LT(std::abs(q.value - square_free(1.0, x, 0.5)), 1e-12) << x;
    EXPECT_LT(q.error, 1e-10);
  }
  const PhysicalUnits u(2.0, 0.7);
  const auto q = oracle::quadrature_evolve_free(sq, 0.3, 0.9, u);
  EXPECT_LT(std::abs(q.value - square_free(1.0, 0.3, 0.9, u)), 1e-12);
}

TEST(QuadratureOracle, PanelRulesAgree) {
  const auto hump = fixtures::smooth_hump(0.8);
  for (int nodes : {10, 20, 30}) {
    oracle::QuadratureSpec spec;
    spec.nodes_per_panel = nodes;
    const auto a = oracle::quadrature_evolve_free(hump, 0.6, 0.2, {}, spec);
    const auto b = oracle::quadrature_evolve_free(hump, 0.6, 0.2, {}, {});
    EXPECT_LT(std::abs(a.value - b.value), 1e-11) << nodes;
  }
}

TEST(QuadratureOracle, ZeroFunctionGivesZero) {
  const auto zero = build_spline({-1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, 1);
  EXPECT_EQ(oracle::quadrature_evolve_free(zero, 0.2, 1.0).value, cplx(0.0, 0.0));
}

TEST(QuadratureOracle, RejectsBadSpecs) {
  const auto sq = fixtures::square();
  oracle::QuadratureSpec spec;
  spec.nodes_per_oscillation = 6.0;
  EXPECT_THROW(oracle::quadrature_evolve_free(sq, 0.0, 1.0, {}, spec), construction_error);
  spec = {};
  spec.nodes_per_panel = 12;
  EXPECT_THROW(oracle::quadrature_evolve_free(sq, 0.0, 1.0, {}, spec), capability_error);
  EXPECT_THROW(oracle::quadrature_evolve_free(sq, 0.0, 0.0), domain_error);
}

TEST(QuadratureOracle, TinyTimeIsInfeasible) {
  EXPECT_THROW(oracle::quadrature_evolve_free(fixtures::square(), 0.0, 1e-8), infeasible_error);
}

TEST(QuadratureOracle, OscillatorReducesToFreeForWeakTrap) {
  const PhysicalUnits u(1.0, 1.0, 1e-5);
  const auto tri = fixtures::triangle();
  for (double x : {-0.5, 0.2, 1.4}) {
    const auto osc = oracle::quadrature_evolve_oscillator(tri, x, 0.7, u);
    const auto free = oracle::quadrature_evolve_free(tri, x, 0.7);
    EXPECT_LT(std::abs(osc.value - free.value), 1e-8) << x;
    EXPECT_LT(std::abs(oracle::square_in_oscillator(1.0, x, 0.7, u) - square_free(1.0, x, 0.7)), 1e-8) << x;
  }
}

TEST(QuadratureOracle, SquareInOscillatorMatchesQuadrature) {
  const PhysicalUnits u(1.0, 1.0, 1.3);
  for (double t : {0.2, 0.9}) {
    const auto q = oracle::quadrature_evolve_oscillator(fixtures::square(), 0.35, t, u);
    EXPECT_LT(std::abs(q.value - oracle::square_in_oscillator(1.0, 0.35, t, u)), 1e-10) << t;
  }
  EXPECT_THROW(oracle::square_in_oscillator(1.0, 0.0, 1.3, u), domain_error);
}

TEST(FourierOracle, SquareZerosAndMean) {
  const double a = 1.3;
  const auto sq = fixtures::square(a);
  EXPECT_LT(std::abs(oracle::numerical_fourier(sq, pi / a)), 1e-15);
  EXPECT_LT(std::abs(oracle::numerical_fourier(sq, 0.0) - cplx(2.0 * a / std::sqrt(2.0 * pi), 0.0)), 1e-15);
  const auto hump = fixtures::smooth_hump();
  // integral of the hump is 2
  EXPECT_LT(std::abs(oracle::numerical_fourier(hump, 0.0) - cplx(2.0 / std::sqrt(2.0 * pi), 0.0)), 1e-15);
}

TEST(FourierOracle, SeriesAndRecurrenceAgreeAtCrossover) {
  // segment lengths 1 and 2 put the branch switch at k = 1 and k = 0.5
  const auto hump = fixtures::smooth_hump();
  for (double k : {0.5, 1.0}) {
    const cplx below = oracle::numerical_fourier(hump, k * (1.0 - 1e-15));
    const cplx above = oracle::numerical_fourier(hump, k * (1.0 + 1e-15));
    EXPECT_LT(std::abs(below - above), 1e-14) << k;
  }
}

TEST(ResidualOracle, GaussianIsSecondOrder) {
  const auto r = oracle::schrodinger_residual(gaussian_free, {}, {0.02, 0.01, 0.005});
  ASSERT_EQ(r.orders.size(), 2u);
  for (double p : r.orders) EXPECT_NEAR(p, 2.0, 0.1);
  EXPECT_LT(r.max_residual.back(), 1e-4);
}

TEST(ResidualOracle, DetectsNonSolution) {
  auto wrong = [](double x, double t) { return gaussian_free(x, t) + 0.01 * x * x; };
  const auto r = oracle::schrodinger_residual(wrong, {}, {0.02, 0.01, 0.005});
  EXPECT_GT(r.max_residual.back(), 1e-3);
  for (double p : r.orders) EXPECT_LT(p, 0.5);
}

TEST(ResidualOracle, OscillatorGroundState) {
  const PhysicalUnits u(1.0, 1.0, 2.0);
  auto ground = [](double x, double t) { return std::exp(-x * x) * std::exp(cplx{0.0, -t}); };
  const auto r = oracle::schrodinger_residual(ground, {}, {0.02, 0.01}, u);
  EXPECT_NEAR(r.orders[0], 2.0, 0.1);
}

TEST(ResidualOracle, TwoDimensionalGaussian) {
  auto psi = [](double x, double y, double t) { return gaussian_free(x, t) * gaussian_free(y, t); };
  oracle::ResidualRegion region;
  region.samples = 7;
  const auto r = oracle::schrodinger_residual_2d(psi, region, {0.02, 0.01});
  EXPECT_NEAR(r.orders[0], 2.0, 0.1);
}

TEST(StencilOracle, ZeroFieldGivesZero) {
  const auto h = oracle::stencil_solver(CMatrix(3, 2), 0.5, 0.5);
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) EXPECT_EQ(h(i, j), cplx(0.0, 0.0));
}

TEST(StencilOracle, SolutionReproducesJunctionValues) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CMatrix v(4, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) v(i, j) = {dist(rng), dist(rng)};
  const double dx = 0.6, dy = 1.4;
  const auto h = oracle::stencil_solver(v, dx, dy);
  // padded junction (k, l) sits at ((k - 1) dx, (l - 1) dy)
  for (std::size_t k = 0; k < h.rows(); ++k)
    for (std::size_t l = 0; l < h.cols(); ++l) {
      cplx s{};
      for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
          s += h(i, j) * 0.5 * std::abs((double(k) - double(i)) * dx) * 0.5 * std::abs((double(l) - double(j)) * dy);
      const bool inside = k >= 1 && k <= 4 && l >= 1 && l <= 3;
      const cplx want = inside ? v(k - 1, l - 1) : cplx{};
      EXPECT_LT(std::abs(s - want), 1e-12) << k << "," << l;
    }
  EXPECT_THROW(oracle::stencil_solver(CMatrix(9, 2), 1.0, 1.0), capability_error);
}

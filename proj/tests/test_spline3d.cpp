#include <gtest/gtest.h>

#include <random>

#include "splinewave/evolve1d.hpp"
#include "splinewave/oracle.hpp"
#include "splinewave/spline3d.hpp"

using namespace splinewave;

namespace {

CArray3 random_values(std::size_t nx, std::size_t ny, std::size_t nz, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CArray3 v(nx, ny, nz);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t k = 0; k < nz; ++k) v(i, j, k) = {dist(rng), dist(rng)};
  return v;
}

}  // namespace

TEST(Trilinear, SingleValueStencil) {
  CArray3 v(3, 3, 3);
  v(1, 1, 1) = 1.0;
  const auto h = trilinear_h(v, 1.0);
  // weight by how many coordinates differ from the centre
  const double by_distance[4] = {-8.0, 4.0, -2.0, 1.0};
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        const int dist = std::abs(a) + std::abs(b) + std::abs(c);
        EXPECT_EQ(h(2 + a, 2 + b, 2 + c), cplx(by_distance[dist], 0.0));
      }
  EXPECT_EQ(h(0, 0, 0), cplx(0.0, 0.0));
}

TEST(Trilinear, ZeroValuesGiveZeroWeights) {
  const auto h = trilinear_h(CArray3(2, 3, 2), 0.5);
  for (std::size_t i = 0; i < h.nx(); ++i)
    for (std::size_t j = 0; j < h.ny(); ++j)
      for (std::size_t k = 0; k < h.nz(); ++k) EXPECT_EQ(h(i, j, k), cplx(0.0, 0.0));
}

TEST(Trilinear, StencilMatchesDenseSolve) {
  std::mt19937_64 rng(53);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto v = random_values(n, n, n, rng);
    const auto h = trilinear_h(v, 0.5, 0.8, 1.1);
    const auto ref = oracle::stencil_solver(v, 0.5, 0.8, 1.1);
    for (std::size_t i = 0; i < h.nx(); ++i)
      for (std::size_t j = 0; j < h.ny(); ++j)
        for (std::size_t k = 0; k < h.nz(); ++k) EXPECT_LT(std::abs(h(i, j, k) - ref(i, j, k)), 1e-12) << n;
  }
  const auto v = random_values(2, 4, 3, rng);
  const auto h = trilinear_h(v, 1.0);
  const auto ref = oracle::stencil_solver(v, 1.0, 1.0, 1.0);
  for (std::size_t i = 0; i < h.nx(); ++i)
    for (std::size_t j = 0; j < h.ny(); ++j)
      for (std::size_t k = 0; k < h.nz(); ++k) EXPECT_LT(std::abs(h(i, j, k) - ref(i, j, k)), 1e-12);
}

TEST(Trilinear, SeparableValuesFactorise) {
  const std::vector<double> u{1.0, -2.0}, w{0.5, 0.0, 1.0}, s{2.0, 1.0};
  CArray3 v(2, 3, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 2; ++k) v(i, j, k) = u[i] * w[j] * s[k];
  auto stencil = [](const std::vector<double>& a) {
    std::vector<double> out(a.size() + 2);
    auto at = [&](std::ptrdiff_t i) { return i < 0 || i >= std::ptrdiff_t(a.size()) ? 0.0 : a[i]; };
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto i = std::ptrdiff_t(k) - 1;
      out[k] = at(i - 1) - 2 * at(i) + at(i + 1);
    }
    return out;
  };
  const auto hu = stencil(u), hw = stencil(w), hs = stencil(s);
  const auto h = trilinear_h(v, 1.0);
  for (std::size_t i = 0; i < hu.size(); ++i)
    for (std::size_t j = 0; j < hw.size(); ++j)
      for (std::size_t k = 0; k < hs.size(); ++k) EXPECT_LT(std::abs(h(i, j, k) - hu[i] * hw[j] * hs[k]), 1e-13);
}

TEST(Trilinear, RequiresEqualSpacing) {
  const GridSpline3D g({0.0, 1.0, 2.5}, {0.0, 1.0}, {0.0, 1.0}, CArray3(3, 2, 2));
  EXPECT_THROW(TrilinearForm{g}, capability_error);
}

TEST(Trilinear, InitialValueIsInterpolant) {
  std::mt19937_64 rng(59);
  const auto axis = detail::uniform_axis(-0.5, 0.5, 3);
  const GridSpline3D g(axis, axis, detail::uniform_axis(0.0, 0.5, 2), random_values(3, 3, 2, rng));
  const TrilinearForm f(g);
  std::uniform_real_distribution<double> dist(-1.2, 1.2);
  for (int k = 0; k < 200; ++k) {
    const double x = dist(rng), y = dist(rng), z = dist(rng);
    EXPECT_LT(std::abs(f(x, y, z) - g.trilinear(x, y, z)), 1e-13);
    EXPECT_LT(std::abs(f.evolve(x, y, z, 0.0) - g.trilinear(x, y, z)), 1e-13);
  }
  EXPECT_THROW(f.evolve(0.0, 0.0, 0.0, -1.0), domain_error);
}

TEST(Trilinear, WeightsHaveVanishingMoments) {
  std::mt19937_64 rng(61);
  const auto axis = detail::uniform_axis(0.0, 0.4, 4);
  const TrilinearForm f(GridSpline3D(axis, axis, axis, random_values(4, 4, 4, rng)));
  cplx total{}, mx{}, my{}, mz{};
  double scale = 0.0;
  const auto& h = f.h();
  for (std::size_t i = 0; i < h.nx(); ++i)
    for (std::size_t j = 0; j < h.ny(); ++j)
      for (std::size_t k = 0; k < h.nz(); ++k) {
        total += h(i, j, k);
        mx += h(i, j, k) * f.ax()[i];
        my += h(i, j, k) * f.ay()[j];
        mz += h(i, j, k) * f.az()[k];
        scale = std::max(scale, std::abs(h(i, j, k)) * 2.0);
      }
  for (const cplx& m : {total, mx, my, mz}) EXPECT_LT(std::abs(m), 1e-12 * scale);
}

TEST(Trilinear, EvolutionMatchesQuadrature) {
  std::mt19937_64 rng(67);
  const auto axis = detail::uniform_axis(-0.5, 0.5, 3);
  const GridSpline3D g(axis, axis, axis, random_values(3, 3, 3, rng));
  const TrilinearForm f(g);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int k = 0; k < 20; ++k) {
    const double x = dist(rng), y = dist(rng), z = dist(rng);
    const auto q = oracle::quadrature_evolve_trilinear(g, x, y, z, 0.2);
    EXPECT_LT(std::abs(f.evolve(x, y, z, 0.2) - q.value), 1e-9);
  }
}

TEST(Trilinear, SeparableEvolvesAsProduct) {
  // product of three unit hats on spacing 0.5
  const TrilinearForm f(GridSpline3D({0.0, 0.5}, {0.0, 0.5}, {0.0, 0.5}, [] {
    CArray3 w(2, 2, 2);
    w(0, 0, 0) = 1.0;
    return w;
  }()));
  const auto hat = evolvable_form(build_spline({-0.5, 0.0, 0.5}, {0.0, 1.0, 0.0}, 1));
  for (double t : {0.05, 0.6}) {
    const cplx want = evolve_free(hat, 0.3, t) * evolve_free(hat, -0.2, t) * evolve_free(hat, 0.9, t);
    EXPECT_LT(std::abs(f.evolve(0.3, -0.2, 0.9, t) - want), 1e-14);
  }
}

TEST(Trilinear, OscillatorActsPerAxis) {
  const PhysicalUnits u(1.0, 1.0, 0.8);
  CArray3 w(2, 2, 2);
  w(0, 0, 0) = 1.0;
  const TrilinearForm f(GridSpline3D({0.0, 0.5}, {0.0, 0.5}, {0.0, 0.5}, w));
  const auto hat = evolvable_form(build_spline({-0.5, 0.0, 0.5}, {0.0, 1.0, 0.0}, 1));
  for (double t : {0.4, 1.5}) {
    const cplx want = evolve(hat, 0.3, t, u) * evolve(hat, -0.2, t, u) * evolve(hat, 0.1, t, u);
    EXPECT_LT(std::abs(evolve(f, 0.3, -0.2, 0.1, t, u) - want), 1e-14) << t;
  }
}

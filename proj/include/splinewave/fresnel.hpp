#pragma once

// Fresnel integrals C, S with the argument normalised as exp(i pi u^2 / 2),
// their antiderivative family E_n, the antiderivatives f_n of the Dirac delta,
// and the free-particle kernels chi and chi_n built on them.

#include <array>
#include <cmath>
#include <limits>

#include "splinewave/core.hpp"

namespace splinewave {

/// Largest n accepted by script_e_n / chi_n. The forward recurrence has only
/// been exercised up to this order.
inline constexpr int kMaxAntiderivativeOrder = 8;

struct FresnelPair {
  double C;
  double S;
};

namespace detail {

/// exp(i pi z^2 / 2) with the phase reduced exactly: z^2 is split into
/// hi + lo with an fma and hi is reduced modulo 4 (the period of the phase in
/// units of pi/2). Keeps full accuracy for |z| up to ~1e7.
inline cplx unit_phase(double z) {
  const double hi = z * z;
  const double lo = std::fma(z, z, -hi);
  const double r = std::fmod(hi, 4.0) + lo;
  const double theta = 0.5 * pi * r;
  return {std::cos(theta), std::sin(theta)};
}

inline constexpr double kSeriesLimit = 1.6;

// E(x) = sum_k (i pi/2)^k x^{2k+1} / (k! (2k+1)), x >= 0.
inline cplx fresnel_series(double x) {
  const cplx step = I * (0.5 * pi * x * x);
  cplx term{1.0, 0.0};
  cplx sum{x, 0.0};
  for (int k = 1; k < 200; ++k) {
    term *= step / static_cast<double>(k);
    const cplx contrib = term * (x / static_cast<double>(2 * k + 1));
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Modified Lentz evaluation of the complementary-error-function continued
// fraction; converges to full precision for x > 1.5.
inline cplx fresnel_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-17;
  const double pix2 = pi * x * x;
  cplx b{1.0, -pix2};
  cplx c{1.0 / tiny, 0.0};
  cplx d = 1.0 / b;
  cplx h = d;
  int n = -1;
  for (int k = 2; k < 500; ++k) {
    n += 2;
    const double a = -static_cast<double>(n) * static_cast<double>(n + 1);
    b += 4.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
  }
  h *= cplx{x, -x};
  return cplx{0.5, 0.5} * (1.0 - unit_phase(x) * h);
}

}  // namespace detail

/// Fresnel integrals C(z) = int_0^z cos(pi u^2/2) du, S(z) likewise with sin.
/// Odd symmetry is exact: the value is computed at |z| and the sign applied.
inline FresnelPair fresnel(double z) {
  if (!std::isfinite(z)) throw domain_error("fresnel: non-finite argument");
  const double x = std::abs(z);
  if (x == 0.0) return {0.0, 0.0};
  const cplx e = x <= detail::kSeriesLimit ? detail::fresnel_series(x) : detail::fresnel_continued_fraction(x);
  const double sign = z < 0.0 ? -1.0 : 1.0;
  return {sign * e.real(), sign * e.imag()};
}

/// E(z) = C(z) + i S(z).
inline cplx script_e(double z) {
  const auto [c, s] = fresnel(z);
  return {c, s};
}

/// E_0..E_n at z in one pass of the forward recurrence
///   E_1 = z E + (i/pi) exp(i pi z^2/2),  E_n = (z E_{n-1} + (i/pi) E_{n-2}) / n.
/// Entries above n are left zero.
inline std::array<cplx, kMaxAntiderivativeOrder + 1> script_e_family(int n, double z) {
  if (n < 0) throw domain_error("script_e_n: negative order");
  if (n > kMaxAntiderivativeOrder) throw capability_error("script_e_n: order above N_MAX");
  std::array<cplx, kMaxAntiderivativeOrder + 1> e{};
  e[0] = script_e(z);
  if (n >= 1) e[1] = z * e[0] + (I / pi) * detail::unit_phase(z);
  for (int k = 2; k <= n; ++k) e[k] = (z * e[k - 1] + (I / pi) * e[k - 2]) / static_cast<double>(k);
  return e;
}

/// n-th antiderivative of E, with E_n' = E_{n-1}.
inline cplx script_e_n(int n, double z) { return script_e_family(n, z)[n]; }

/// n-th antiderivative of the Dirac delta: f_0 = sign(x)/2 (0 at x == 0),
/// f_n = |x| x^{n-1} / (2 n!).
inline double f_n(int n, double x) {
  if (n < 0) throw domain_error("f_n: negative order");
  if (n == 0) return x > 0.0 ? 0.5 : (x < 0.0 ? -0.5 : 0.0);
  double v = 0.5 * std::abs(x);
  for (int k = 1; k < n; ++k) v *= x / static_cast<double>(k + 1);
  return v;
}

/// Below this time the kernels chi_n return f_n exactly. `length` is the
/// extent of the wave function being evolved.
inline double small_time_cutoff(const PhysicalUnits& units, double length = 1.0) {
  return 1e-12 * units.time_scale(length);
}

/// Free propagator sqrt(m / (2 pi i hbar t)) exp(i m x^2 / (2 hbar t)).
inline cplx chi(double x, double t, const PhysicalUnits& units) {
  if (!std::isfinite(x) || !std::isfinite(t)) throw domain_error("chi: non-finite argument");
  if (t == 0.0) throw singular_time_error("chi: kernel is singular at t = 0");
  const double at = std::abs(t);
  const double scale = std::sqrt(units.m() / (pi * units.hbar() * at));
  const cplx phase = detail::unit_phase(x * scale);
  // sqrt(m / (2 pi i hbar t)) on the principal branch.
  const cplx amp = std::sqrt(cplx{units.m() / (2.0 * pi * units.hbar() * t), 0.0} / I);
  return t > 0.0 ? amp * phase : amp * std::conj(phase);
}

/// chi_0..chi_n at (x, t): the free evolution of f_0..f_n. For t below
/// `t_eps` the initial values f_k(x) are returned.
inline std::array<cplx, kMaxAntiderivativeOrder + 1> chi_family(int n, double x, double t, const PhysicalUnits& units,
                                                               double t_eps) {
  if (!std::isfinite(x) || !std::isfinite(t)) throw domain_error("chi_n: non-finite argument");
  if (t < 0.0) throw domain_error("chi_n: negative time");
  if (n > kMaxAntiderivativeOrder) throw capability_error("chi_n: order above N_MAX");
  std::array<cplx, kMaxAntiderivativeOrder + 1> out{};
  if (t < t_eps) {
    for (int k = 0; k <= n; ++k) out[k] = f_n(k, x);
    return out;
  }
  const double len = std::sqrt(pi * units.hbar() * t / units.m());
  const auto e = script_e_family(n, x / len);
  // 1 / sqrt(2i) = e^{-i pi/4} / sqrt(2)
  cplx factor = std::conj(sqrt_i) / std::numbers::sqrt2;
  for (int k = 0; k <= n; ++k) {
    out[k] = factor * e[k];
    factor *= len;
  }
  return out;
}

inline cplx chi_n(int n, double x, double t, const PhysicalUnits& units, double t_eps) {
  return chi_family(n, x, t, units, t_eps)[n];
}

/// chi_n with the cutoff taken for a unit length scale.
inline cplx chi_n(int n, double x, double t, const PhysicalUnits& units = {}) {
  return chi_n(n, x, t, units, small_time_cutoff(units));
}

}  // namespace splinewave

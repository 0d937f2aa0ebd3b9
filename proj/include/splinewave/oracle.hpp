#pragma once

// Independent numerical ground truth. Nothing here uses the layered forms or
// the chi_n kernels: evolutions are direct quadratures of the propagator
// against the piecewise polynomial, transforms are integrated segment by
// segment, and stencils are checked against dense linear solves.

#include <Eigen/Dense>

#include <functional>

#include "splinewave/evolve1d.hpp"
#include "splinewave/parallel.hpp"
#include "splinewave/quadrature.hpp"
#include "splinewave/spline1d.hpp"
#include "splinewave/spline2d.hpp"
#include "splinewave/spline3d.hpp"

namespace splinewave::oracle {

struct QuadratureSpec {
  int nodes_per_panel = 20;
  double nodes_per_oscillation = 12.0;
  double tolerance = 1e-10;
  double max_oscillations = 1e6;

  void validate() const {
    if (nodes_per_panel < 4 || !gauss_rule_supported(nodes_per_panel))
      throw capability_error("nodes_per_panel must be one of 7, 10, 15, 20, 25, 30");
    if (!(nodes_per_oscillation >= 8.0)) throw construction_error("need at least 8 nodes per kernel oscillation");
  }
};

/// Quadrature value at the finer of two panel densities, with the difference
/// between the two as the error estimate.
struct Estimate {
  cplx value;
  double error = 0.0;

  Estimate& operator+=(const Estimate& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
};

namespace detail {

inline int panels_for(double length, double kmax, const QuadratureSpec& spec) {
  const double oscillations = kmax * length / (2.0 * pi);
  if (oscillations > spec.max_oscillations)
    throw infeasible_error("kernel completes " + std::to_string(oscillations) +
                           " oscillations over a segment; quadrature is infeasible at this time");
  return std::max(1, static_cast<int>(std::ceil(oscillations * spec.nodes_per_oscillation / spec.nodes_per_panel)));
}

template <class F>
cplx gauss_panels(double lo, double hi, int panels, const GaussRule& rule, F&& f) {
  cplx sum{0.0, 0.0};
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width, half = 0.5 * width;
    cplx part{0.0, 0.0};
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) part += rule.weights[k] * f(mid + half * rule.nodes[k]);
    sum += part * half;
  }
  return sum;
}

/// int_lo^hi f, panel count set by the largest phase rate kmax of f.
template <class F>
Estimate integrate(double lo, double hi, double kmax, const QuadratureSpec& spec, F&& f) {
  if (!(hi > lo)) return {};
  const auto& rule = gauss_rule(spec.nodes_per_panel);
  const int panels = panels_for(hi - lo, kmax, spec);
  const cplx coarse = gauss_panels(lo, hi, panels, rule, f);
  const cplx fine = gauss_panels(lo, hi, 2 * panels, rule, f);
  return {fine, std::abs(fine - coarse)};
}

/// Mehler kernel of the oscillator, principal branch.
struct OscillatorKernel {
  cplx amplitude;
  double rate;  // m omega / (2 hbar sin omega t)
  double cos_wt;
  double slope;  // m omega / (hbar sin omega t)

  OscillatorKernel(double t, const PhysicalUnits& u) {
    const double w = u.omega();
    if (!(w > 0.0)) throw domain_error("oscillator kernel needs omega > 0");
    const double wt = w * t;
    if (!(wt > 0.0) || !(wt < 0.5 * pi)) throw domain_error("oscillator kernel needs 0 < omega t < pi/2");
    const double s = std::sin(wt);
    cos_wt = std::cos(wt);
    amplitude = std::sqrt(cplx{u.m() * w / (2.0 * pi * u.hbar() * s), 0.0} / I);
    rate = u.m() * w / (2.0 * u.hbar() * s);
    slope = 2.0 * rate;
  }

  cplx operator()(double x, double xp) const {
    const double th = rate * ((x * x + xp * xp) * cos_wt - 2.0 * x * xp);
    return amplitude * cplx{std::cos(th), std::sin(th)};
  }

  /// Largest |d phase / d x'| over [lo, hi].
  double kmax(double x, double lo, double hi) const {
    return slope * std::max(std::abs(lo * cos_wt - x), std::abs(hi * cos_wt - x));
  }
};

inline double free_kmax(double x, double lo, double hi, double t, const PhysicalUnits& u) {
  return u.m() * std::max(std::abs(x - lo), std::abs(x - hi)) / (u.hbar() * t);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1D propagator quadratures

/// psi(x, t) = int K_free(x - x', t) phi(x') dx' by Gauss-Legendre panels on
/// each spline segment.
inline Estimate quadrature_evolve_free(const Spline1D& s, double x, double t, const PhysicalUnits& units = {},
                                       const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(t > 0.0)) throw domain_error("quadrature oracle needs t > 0");
  const auto& a = s.junctions();
  Estimate total;
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    const auto& c = s.segments()[j];
    const double lo = a[j], hi = a[j + 1];
    total += detail::integrate(lo, hi, detail::free_kmax(x, lo, hi, t, units), spec,
                               [&](double xp) { return chi(x - xp, t, units) * poly::eval(c, xp - lo); });
  }
  return total;
}

/// Same with the oscillator propagator; requires 0 < omega t < pi/2.
inline Estimate quadrature_evolve_oscillator(const Spline1D& s, double x, double t, const PhysicalUnits& units,
                                             const QuadratureSpec& spec = {}) {
  spec.validate();
  const detail::OscillatorKernel K(t, units);
  const auto& a = s.junctions();
  Estimate total;
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    const auto& c = s.segments()[j];
    const double lo = a[j], hi = a[j + 1];
    total += detail::integrate(lo, hi, K.kmax(x, lo, hi), spec,
                               [&](double xp) { return K(x, xp) * poly::eval(c, xp - lo); });
  }
  return total;
}

/// Closed form of the square wave on (-a, a) evolving in the oscillator,
/// written directly in Fresnel integrals.
inline cplx square_in_oscillator(double a, double x, double t, const PhysicalUnits& u) {
  const double w = u.omega();
  if (!(w > 0.0) || !(w * t > 0.0) || !(w * t < 0.5 * pi)) throw domain_error("needs 0 < omega t < pi/2");
  const double alpha = u.alpha();
  const double c = std::cos(w * t);
  const double scale = std::sqrt(2.0 / (pi * std::sin(2.0 * w * t))) / alpha;
  const double zp = scale * (x + a * c), zm = scale * (x - a * c);
  const double th = -0.5 * std::tan(w * t) * x * x / (alpha * alpha);
  const cplx pref = cplx{std::cos(th), std::sin(th)} / std::sqrt(2.0 * I * c);
  return pref * (script_e(zp) - script_e(zm));
}

// ---------------------------------------------------------------------------
// Fourier transform, segment by segment

namespace detail {

/// I_p = int_0^d u^p exp(-i k u) du for p = 0..pmax.
inline std::vector<cplx> monomial_transforms(int pmax, double k, double d) {
  std::vector<cplx> out(pmax + 1);
  if (std::abs(k * d) >= 1.0) {
    const cplx ik = I * k;
    const cplx e = std::exp(-ik * d);
    out[0] = (1.0 - e) / ik;
    for (int p = 1; p <= pmax; ++p) out[p] = -std::pow(d, p) * e / ik + (static_cast<double>(p) / ik) * out[p - 1];
    return out;
  }
  for (int p = 0; p <= pmax; ++p) {
    // sum_q (-i k)^q d^{p+q+1} / (q! (p+q+1))
    cplx term = std::pow(d, p + 1);
    cplx sum = term / static_cast<double>(p + 1);
    for (int q = 1; q < 60; ++q) {
      term *= -I * k * d / static_cast<double>(q);
      const cplx add = term / static_cast<double>(p + q + 1);
      sum += add;
      if (std::abs(add) < 1e-19 * std::abs(sum)) break;
    }
    out[p] = sum;
  }
  return out;
}

}  // namespace detail

/// Phi(k) = (2 pi)^{-1/2} int exp(-i k x) phi(x) dx, exact per segment.
inline cplx numerical_fourier(const Spline1D& s, double k) {
  const auto& a = s.junctions();
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    const auto& c = s.segments()[j];
    const auto In = detail::monomial_transforms(static_cast<int>(c.size()) - 1, k, a[j + 1] - a[j]);
    cplx seg{0.0, 0.0};
    for (std::size_t p = 0; p < c.size(); ++p) seg += c[p] * In[p];
    sum += std::exp(cplx{0.0, -k * a[j]}) * seg;
  }
  return sum * kInvSqrt2Pi;
}

// ---------------------------------------------------------------------------
// Multilinear grids in 2D and 3D

namespace detail {

/// H_i(x) = int K(x - x') hat_i(x') dx' for each junction of a uniform axis,
/// where hat_i is the piecewise-linear unit hat (the grid is padded by one
/// spacing so edge hats ramp down to zero beyond the last junction).
inline std::vector<Estimate> hat_integrals(const std::vector<double>& g, double x, double t,
                                           const PhysicalUnits& units, const QuadratureSpec& spec) {
  const double d = splinewave::detail::uniform_spacing(g, "grid");
  std::vector<Estimate> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double c = g[i];
    auto kern = [&](double xp) { return chi(x - xp, t, units); };
    out[i] = integrate(c - d, c, free_kmax(x, c - d, c, t, units), spec,
                       [&](double xp) { return kern(xp) * ((xp - (c - d)) / d); });
    out[i] += integrate(c, c + d, free_kmax(x, c, c + d, t, units), spec,
                        [&](double xp) { return kern(xp) * ((c + d - xp) / d); });
  }
  return out;
}

}  // namespace detail

inline Estimate quadrature_evolve_bilinear(const GridSpline2D& g, double x, double y, double t,
                                           const PhysicalUnits& units = {}, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(t > 0.0)) throw domain_error("quadrature oracle needs t > 0");
  const auto hx = detail::hat_integrals(g.x, x, t, units, spec);
  const auto hy = detail::hat_integrals(g.y, y, t, units, spec);
  Estimate e;
  for (std::size_t i = 0; i < hx.size(); ++i)
    for (std::size_t j = 0; j < hy.size(); ++j) {
      const cplx v = g.values(i, j);
      if (v == 0.0) continue;
      e.value += v * hx[i].value * hy[j].value;
      e.error += std::abs(v) * (hx[i].error * std::abs(hy[j].value) + std::abs(hx[i].value) * hy[j].error);
    }
  return e;
}

inline Estimate quadrature_evolve_trilinear(const GridSpline3D& g, double x, double y, double z, double t,
                                            const PhysicalUnits& units = {}, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(t > 0.0)) throw domain_error("quadrature oracle needs t > 0");
  const auto hx = detail::hat_integrals(g.x, x, t, units, spec);
  const auto hy = detail::hat_integrals(g.y, y, t, units, spec);
  const auto hz = detail::hat_integrals(g.z, z, t, units, spec);
  Estimate e;
  for (std::size_t i = 0; i < hx.size(); ++i)
    for (std::size_t j = 0; j < hy.size(); ++j)
      for (std::size_t k = 0; k < hz.size(); ++k) {
        const cplx v = g.values(i, j, k);
        if (v == 0.0) continue;
        e.value += v * hx[i].value * hy[j].value * hz[k].value;
        e.error += std::abs(v) * (hx[i].error * std::abs(hy[j].value * hz[k].value) +
                                  hy[j].error * std::abs(hx[i].value * hz[k].value) +
                                  hz[k].error * std::abs(hx[i].value * hy[j].value));
      }
  return e;
}

/// A rectangular cell carrying an arbitrary function (zero elsewhere).
struct Cell2D {
  double x0, x1, y0, y1;
  std::function<cplx(double, double)> f;
};

/// Brute-force tensor Gauss-Legendre of the free propagator over a set of
/// cells.
inline Estimate quadrature_evolve_cells(const std::vector<Cell2D>& cells, double x, double y, double t,
                                        const PhysicalUnits& units = {}, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(t > 0.0)) throw domain_error("quadrature oracle needs t > 0");
  const auto& rule = gauss_rule(spec.nodes_per_panel);
  auto tensor = [&](const Cell2D& c, int px, int py) {
    std::vector<double> nx, wx, ny, wy;
    auto nodes = [&](double lo, double hi, int panels, std::vector<double>& n, std::vector<double>& w) {
      const double width = (hi - lo) / panels;
      for (int p = 0; p < panels; ++p)
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          n.push_back(lo + (p + 0.5) * width + 0.5 * width * rule.nodes[k]);
          w.push_back(0.5 * width * rule.weights[k]);
        }
    };
    nodes(c.x0, c.x1, px, nx, wx);
    nodes(c.y0, c.y1, py, ny, wy);
    std::vector<cplx> ky(ny.size());
    for (std::size_t b = 0; b < ny.size(); ++b) ky[b] = chi(y - ny[b], t, units) * wy[b];
    cplx sum{0.0, 0.0};
    for (std::size_t a = 0; a < nx.size(); ++a) {
      cplx row{0.0, 0.0};
      for (std::size_t b = 0; b < ny.size(); ++b) row += ky[b] * c.f(nx[a], ny[b]);
      sum += chi(x - nx[a], t, units) * wx[a] * row;
    }
    return sum;
  };
  Estimate e;
  for (const auto& c : cells) {
    const int px = detail::panels_for(c.x1 - c.x0, detail::free_kmax(x, c.x0, c.x1, t, units), spec);
    const int py = detail::panels_for(c.y1 - c.y0, detail::free_kmax(y, c.y0, c.y1, t, units), spec);
    const cplx coarse = tensor(c, px, py);
    const cplx fine = tensor(c, 2 * px, 2 * py);
    e.value += fine;
    e.error += std::abs(fine - coarse);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Brute-force stencils

namespace detail {

/// F_kl = |a_k - a_l| / 2 on an axis padded by one spacing each side. The
/// dense solves below run in extended precision: the Kronecker systems reach
/// a few hundred unknowns and their conditioning would otherwise put
/// rounding at the 1e-12 level the stencils are checked to.
using XMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using XVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

inline XMatrix kink_matrix(const std::vector<long double>& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  XMatrix F(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) F(k, l) = 0.5L * std::abs(a[k] - a[l]);
  return F;
}

inline std::vector<long double> padded_axis(std::size_t n, double d) {
  std::vector<long double> a(n + 2);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = static_cast<long double>(d) * (static_cast<long double>(k) - 1.0L);
  return a;
}

/// Solves A h = b for complex b, real and imaginary parts separately.
inline std::vector<cplx> dense_solve(const XMatrix& A, const std::vector<cplx>& b) {
  const Eigen::FullPivLU<XMatrix> lu(A);
  if (!lu.isInvertible()) throw error("stencil system is singular");
  XVector re(A.rows()), im(A.rows());
  for (Eigen::Index k = 0; k < A.rows(); ++k) {
    re(k) = b[static_cast<std::size_t>(k)].real();
    im(k) = b[static_cast<std::size_t>(k)].imag();
  }
  const XVector hr = lu.solve(re), hi = lu.solve(im);
  std::vector<cplx> h(b.size());
  for (std::size_t k = 0; k < h.size(); ++k)
    h[k] = {static_cast<double>(hr(static_cast<Eigen::Index>(k))), static_cast<double>(hi(static_cast<Eigen::Index>(k)))};
  return h;
}

}  // namespace detail

/// Solves sum_ij h_ij f_1(a_k - a_i) f_1(b_l - b_j) = phi_kl at every
/// junction of the zero-padded grid as one dense system.
inline CMatrix stencil_solver(const CMatrix& values, double dx, double dy) {
  const std::size_t nx = values.rows(), ny = values.cols();
  if (nx > 8 || ny > 8) throw capability_error("stencil solver limited to 8 junctions per axis");
  const auto Fx = detail::kink_matrix(detail::padded_axis(nx, dx));
  const auto Fy = detail::kink_matrix(detail::padded_axis(ny, dy));
  const Eigen::Index px = Fx.rows(), py = Fy.rows();
  detail::XMatrix A(px * py, px * py);
  for (Eigen::Index k = 0; k < px; ++k)
    for (Eigen::Index l = 0; l < py; ++l)
      for (Eigen::Index i = 0; i < px; ++i)
        for (Eigen::Index j = 0; j < py; ++j) A(k * py + l, i * py + j) = Fx(k, i) * Fy(l, j);
  std::vector<cplx> b(static_cast<std::size_t>(px * py));
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) b[(i + 1) * static_cast<std::size_t>(py) + j + 1] = values(i, j);
  const auto h = detail::dense_solve(A, b);
  CMatrix out(px, py);
  for (Eigen::Index i = 0; i < px; ++i)
    for (Eigen::Index j = 0; j < py; ++j) out(i, j) = h[static_cast<std::size_t>(i * py + j)];
  return out;
}

inline CArray3 stencil_solver(const CArray3& values, double dx, double dy, double dz) {
  const std::size_t nx = values.nx(), ny = values.ny(), nz = values.nz();
  if (nx > 8 || ny > 8 || nz > 8) throw capability_error("stencil solver limited to 8 junctions per axis");
  const auto Fx = detail::kink_matrix(detail::padded_axis(nx, dx));
  const auto Fy = detail::kink_matrix(detail::padded_axis(ny, dy));
  const auto Fz = detail::kink_matrix(detail::padded_axis(nz, dz));
  const Eigen::Index px = Fx.rows(), py = Fy.rows(), pz = Fz.rows();
  auto idx = [&](Eigen::Index i, Eigen::Index j, Eigen::Index k) { return (i * py + j) * pz + k; };
  detail::XMatrix A(px * py * pz, px * py * pz);
  for (Eigen::Index k1 = 0; k1 < px; ++k1)
    for (Eigen::Index l1 = 0; l1 < py; ++l1)
      for (Eigen::Index m1 = 0; m1 < pz; ++m1)
        for (Eigen::Index i = 0; i < px; ++i)
          for (Eigen::Index j = 0; j < py; ++j)
            for (Eigen::Index k = 0; k < pz; ++k) A(idx(k1, l1, m1), idx(i, j, k)) = Fx(k1, i) * Fy(l1, j) * Fz(m1, k);
  std::vector<cplx> b(static_cast<std::size_t>(px * py * pz));
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t k = 0; k < nz; ++k)
        b[static_cast<std::size_t>(idx(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(j + 1),
                                       static_cast<Eigen::Index>(k + 1)))] = values(i, j, k);
  const auto h = detail::dense_solve(A, b);
  CArray3 out(px, py, pz);
  for (Eigen::Index i = 0; i < px; ++i)
    for (Eigen::Index j = 0; j < py; ++j)
      for (Eigen::Index k = 0; k < pz; ++k) out(i, j, k) = h[static_cast<std::size_t>(idx(i, j, k))];
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference Schroedinger residual

struct ResidualRegion {
  double x0 = -2.0, x1 = 2.0;
  double t0 = 0.5, t1 = 1.0;
  int samples = 21;  // per axis
};

struct ResidualReport {
  std::vector<double> steps;
  std::vector<double> max_residual;
  std::vector<double> rms_residual;
  std::vector<double> orders;  // log2 ratio between successive steps
};

/// Residual of i hbar psi_t = -hbar^2/(2m) psi_xx + m omega^2 x^2 / 2 psi with
/// central differences (the time step equals the space step) at a fixed set
/// of sample points, for each step size.
inline ResidualReport schrodinger_residual(const std::function<cplx(double, double)>& psi, const ResidualRegion& region,
                                           const std::vector<double>& steps, const PhysicalUnits& units = {}) {
  ResidualReport r;
  const double hbar = units.hbar(), m = units.m(), w = units.omega();
  const int n = std::max(2, region.samples);
  for (double h : steps) {
    double mx = 0.0, ss = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double x = region.x0 + (region.x1 - region.x0) * a / (n - 1);
        const double t = region.t0 + (region.t1 - region.t0) * b / (n - 1);
        const cplx c = psi(x, t);
        const cplx dt = (psi(x, t + h) - psi(x, t - h)) / (2.0 * h);
        const cplx dxx = (psi(x + h, t) - 2.0 * c + psi(x - h, t)) / (h * h);
        const cplx res = I * hbar * dt + (hbar * hbar / (2.0 * m)) * dxx - 0.5 * m * w * w * x * x * c;
        mx = std::max(mx, std::abs(res));
        ss += std::norm(res);
      }
    r.steps.push_back(h);
    r.max_residual.push_back(mx);
    r.rms_residual.push_back(std::sqrt(ss / (n * n)));
  }
  for (std::size_t k = 1; k < r.steps.size(); ++k)
    r.orders.push_back(std::log(r.max_residual[k - 1] / r.max_residual[k]) / std::log(r.steps[k - 1] / r.steps[k]));
  return r;
}

/// Free-particle residual in two dimensions over the square [x0, x1]^2 and
/// [t0, t1], with the potential m omega^2 (x^2 + y^2) / 2.
inline ResidualReport schrodinger_residual_2d(const std::function<cplx(double, double, double)>& psi,
                                              const ResidualRegion& region, const std::vector<double>& steps,
                                              const PhysicalUnits& units = {}) {
  ResidualReport r;
  const double hbar = units.hbar(), m = units.m(), w = units.omega();
  const int n = std::max(2, region.samples);
  for (double h : steps) {
    double mx = 0.0, ss = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const double x = region.x0 + (region.x1 - region.x0) * a / (n - 1);
          const double y = region.x0 + (region.x1 - region.x0) * b / (n - 1);
          const double t = region.t0 + (region.t1 - region.t0) * c / (n - 1);
          const cplx v = psi(x, y, t);
          const cplx dt = (psi(x, y, t + h) - psi(x, y, t - h)) / (2.0 * h);
          const cplx lap = (psi(x + h, y, t) + psi(x - h, y, t) + psi(x, y + h, t) + psi(x, y - h, t) - 4.0 * v) / (h * h);
          const cplx res = I * hbar * dt + (hbar * hbar / (2.0 * m)) * lap - 0.5 * m * w * w * (x * x + y * y) * v;
          mx = std::max(mx, std::abs(res));
          ss += std::norm(res);
        }
    r.steps.push_back(h);
    r.max_residual.push_back(mx);
    r.rms_residual.push_back(std::sqrt(ss / (n * n * n)));
  }
  for (std::size_t k = 1; k < r.steps.size(); ++k)
    r.orders.push_back(std::log(r.max_residual[k - 1] / r.max_residual[k]) / std::log(r.steps[k - 1] / r.steps[k]));
  return r;
}

// ---------------------------------------------------------------------------
// Norms of evolved waves and the far-field gap

/// Sample spacing and half-width for whole-line integrals of |psi|^2 at time
/// t. |psi|^2 is band limited to about m * span / (hbar t), so a trapezoid
/// rule at a fraction of that period converges spectrally; the window is
/// `reach` times hbar t / m beyond the support.
struct LineGrid {
  double lo, hi, step;
  std::size_t count;
};

inline LineGrid line_grid(double left, double right, double t, const PhysicalUnits& u, double reach) {
  const double span = std::max(right - left, 1e-300);
  const double scale = u.hbar() * t / u.m();
  const double step = 2.0 * pi * scale / span / 8.0;
  const double lo = left - reach * scale, hi = right + reach * scale;
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
  return {lo, hi, (hi - lo) / static_cast<double>(count - 1), count};
}

/// int |psi(x, t)|^2 dx for the free evolution of a 1D form. The
/// contribution beyond the window from value jumps (|Phi|^2 ~ 1/k^2) is added
/// in closed form.
inline double evolved_norm_1d(const EvolvableForm1D& form, double t, const PhysicalUnits& u = {},
                              double reach = 1e5) {
  if (!(t > 0.0)) throw domain_error("evolved norm needs t > 0");
  const auto& a = form.junctions();
  const auto g = line_grid(a.front(), a.back(), t, u, reach);
  const double sum = parallel_sum<double>(g.count, [&](std::size_t k) {
    const double x = g.lo + g.step * static_cast<double>(k);
    const double w = (k == 0 || k + 1 == g.count) ? 0.5 : 1.0;
    return w * std::norm(evolve_free(form, x, t, u));
  });
  double jumps = 0.0;
  if (const auto* l0 = form.layer(0))
    for (const auto& v : l0->weights) jumps += std::norm(v);
  // Beyond the window |psi|^2 dx maps onto |Phi(k)|^2 dk with |k| > reach.
  const double tail = jumps / (pi * reach);
  return sum * g.step + tail;
}

/// int |psi|^2 over the plane for a 2D layered form, on a tensor trapezoid
/// grid reaching `reach` * hbar t / m beyond the support.
inline double evolved_norm_2d(const EvolvableForm2D& form, double t, const PhysicalUnits& u = {},
                              double reach = 400.0) {
  if (!(t > 0.0)) throw domain_error("evolved norm needs t > 0");
  const auto gx = line_grid(form.ax().front(), form.ax().back(), t, u, reach);
  const auto gy = line_grid(form.ay().front(), form.ay().back(), t, u, reach);
  std::vector<double> ys(gy.count);
  for (std::size_t k = 0; k < gy.count; ++k) ys[k] = gy.lo + gy.step * static_cast<double>(k);
  constexpr std::size_t block = 64;
  const std::size_t nblocks = (gx.count + block - 1) / block;
  const double sum = parallel_sum<double>(nblocks, [&](std::size_t b) {
    std::vector<double> xs;
    for (std::size_t k = b * block; k < std::min(gx.count, (b + 1) * block); ++k)
      xs.push_back(gx.lo + gx.step * static_cast<double>(k));
    const auto psi = evolve_free_grid(form, xs, ys, t, u);
    double s = 0.0;
    for (std::size_t r = 0; r < xs.size(); ++r) {
      const std::size_t k = b * block + r;
      const double wx = (k == 0 || k + 1 == gx.count) ? 0.5 : 1.0;
      for (std::size_t c = 0; c < ys.size(); ++c) {
        const double wy = (c == 0 || c + 1 == ys.size()) ? 0.5 : 1.0;
        s += wx * wy * std::norm(psi(r, c));
      }
    }
    return s;
  });
  return sum * gx.step * gy.step;
}

struct AsymptoticGap {
  double complex_gap = 0.0;   // ||psi - psi_asym|| / ||psi||
  double modulus_gap = 0.0;   // || |psi| - |psi_asym| || / ||psi||
  double identity_gap = 0.0;  // ||(exp(i m (x-<x>)^2 / 2 hbar t) - 1) phi|| / ||phi||
};

/// Relative L2 distance between the exact free evolution and its far-field
/// form at time t, integrated over the line. Because the free evolution is
/// unitary, the complex gap also equals the identity_gap computed directly
/// from the initial function; both are reported as a cross-check.
inline AsymptoticGap asymptotic_gap(const Spline1D& s, double t, const PhysicalUnits& u = {}, double reach = 2000.0) {
  if (!(t > 0.0)) throw domain_error("asymptotic gap needs t > 0");
  const auto form = evolvable_form(s);
  const auto mom = moments(s);
  const AsymptoticWave1D asym(form, mom.mean_x, u);
  const auto g = line_grid(s.left(), s.right(), t, u, reach);
  const double csum = parallel_sum<double>(g.count, [&](std::size_t k) {
    const double x = g.lo + g.step * static_cast<double>(k);
    const double w = (k == 0 || k + 1 == g.count) ? 0.5 : 1.0;
    return w * std::norm(evolve_free(form, x, t, u) - asym(x, t));
  });
  // |psi| - |psi_asym| has kinks wherever the far-field transform vanishes,
  // so the band-limit argument does not apply: use a 32x finer trapezoid.
  // The integrand falls off fast enough that a window of 200 hbar t / m
  // beyond the support is ample.
  auto mg = line_grid(s.left(), s.right(), t, u, std::min(reach, 200.0));
  mg.count = (mg.count - 1) * 32 + 1;
  mg.step /= 32.0;
  const double msum = parallel_sum<double>(mg.count, [&](std::size_t k) {
    const double x = mg.lo + mg.step * static_cast<double>(k);
    const double w = (k == 0 || k + 1 == mg.count) ? 0.5 : 1.0;
    return w * std::pow(std::abs(evolve_free(form, x, t, u)) - std::abs(asym(x, t)), 2);
  });
  // Value jumps J of phi become jumps J (exp(i m (a-<x>)^2 / 2 hbar t) - 1) of
  // the function whose evolution is psi - psi_asym; add their 1/k^2 tail.
  double tail = 0.0;
  if (const auto* l0 = form.layer(0))
    for (std::size_t i = 0; i < l0->weights.size(); ++i) {
      const double X = form.junctions()[i] - mom.mean_x;
      const double th = u.m() * X * X / (2.0 * u.hbar() * t);
      tail += std::norm(l0->weights[i] * (cplx{std::cos(th), std::sin(th)} - 1.0));
    }
  tail /= pi * reach;

  // Identity: integral of 4 sin^2(m X^2 / 4 hbar t) |phi|^2, by panels.
  QuadratureSpec spec;
  double ident = 0.0;
  const auto& a = s.junctions();
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    const auto& c = s.segments()[j];
    const double lo = a[j], hi = a[j + 1];
    const double kmax = u.m() * std::max(std::abs(lo - mom.mean_x), std::abs(hi - mom.mean_x)) / (u.hbar() * t);
    ident += detail::integrate(lo, hi, kmax, spec,
                               [&](double x) {
                                 const double X = x - mom.mean_x;
                                 const double sn = std::sin(u.m() * X * X / (4.0 * u.hbar() * t));
                                 return cplx{4.0 * sn * sn * std::norm(poly::eval(c, x - lo)), 0.0};
                               })
                 .value.real();
  }
  return {std::sqrt((csum * g.step + tail) / mom.norm2), std::sqrt(msum * mg.step / mom.norm2),
          std::sqrt(ident / mom.norm2)};
}

}  // namespace splinewave::oracle

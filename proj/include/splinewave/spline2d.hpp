#pragma once

// Splines on rectangular grids: bilinear interpolants and their 9-point
// stencil, general tensor layered forms with exact free evolution and
// Fourier transforms, and the biquadratic cell march that recovers a regular
// biquadratic spline from junction values and 1D derivative data.

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "splinewave/evolve1d.hpp"
#include "splinewave/spline1d.hpp"

namespace splinewave {

// ---------------------------------------------------------------------------
// Grid values and the bilinear interpolant

namespace detail {

/// Cell index i in [-1, n-1] and local coordinate in [0, 1] of p on the axis g
/// extended by one edge spacing at each end; nullopt outside.
inline std::optional<std::pair<std::ptrdiff_t, double>> padded_cell(const std::vector<double>& g, double p) {
  const std::size_t n = g.size();
  const double lo = g.front() - (g[1] - g[0]);
  const double hi = g.back() + (g[n - 1] - g[n - 2]);
  if (!(p >= lo && p <= hi)) return std::nullopt;
  if (p < g.front()) return std::pair<std::ptrdiff_t, double>{-1, (p - lo) / (g.front() - lo)};
  if (p >= g.back()) return std::pair<std::ptrdiff_t, double>{static_cast<std::ptrdiff_t>(n - 1), (p - g.back()) / (hi - g.back())};
  const auto i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), p) - g.begin()) - 1;
  return std::pair<std::ptrdiff_t, double>{static_cast<std::ptrdiff_t>(i), (p - g[i]) / (g[i + 1] - g[i])};
}

}  // namespace detail

struct GridSpline2D {
  std::vector<double> x;
  std::vector<double> y;
  CMatrix values;  // values(i, j) at (x[i], y[j])

  GridSpline2D() = default;
  GridSpline2D(std::vector<double> gx, std::vector<double> gy, CMatrix v)
      : x(std::move(gx)), y(std::move(gy)), values(std::move(v)) {
    detail::check_junctions(x);
    detail::check_junctions(y);
    if (values.rows() != x.size() || values.cols() != y.size())
      throw construction_error("grid values must be " + std::to_string(x.size()) + " x " + std::to_string(y.size()));
  }

  /// Bilinear interpolant of the values with zeros one spacing beyond each
  /// edge of the grid, the function whose jump weights bilinear_h returns.
  cplx bilinear(double px, double py) const {
    const auto cx = detail::padded_cell(x, px);
    const auto cy = detail::padded_cell(y, py);
    if (!cx || !cy) return {0.0, 0.0};
    auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) -> cplx {
      if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(x.size()) || j >= static_cast<std::ptrdiff_t>(y.size()))
        return {};
      return values(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };
    const auto [i, u] = *cx;
    const auto [j, v] = *cy;
    return (1 - u) * (1 - v) * at(i, j) + u * (1 - v) * at(i + 1, j) + (1 - u) * v * at(i, j + 1) +
           u * v * at(i + 1, j + 1);
  }

  /// True when every value on the outer frame is zero.
  bool zero_frame() const {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (values(i, 0) != 0.0 || values(i, y.size() - 1) != 0.0) return false;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (values(0, j) != 0.0 || values(x.size() - 1, j) != 0.0) return false;
    return true;
  }
};

/// Jump weights of the bilinear interpolant of `values` (zero beyond the
/// grid) on the grid padded by one junction on every side: entry (i+1, j+1)
/// belongs to junction (i, j).
inline CMatrix bilinear_h(const CMatrix& values, double dx, double dy) {
  if (!(dx > 0.0) || !(dy > 0.0)) throw construction_error("grid spacing must be positive");
  const std::size_t nx = values.rows(), ny = values.cols();
  auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) -> cplx {
    if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(nx) || j >= static_cast<std::ptrdiff_t>(ny)) return {};
    return values(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };
  static constexpr double w[3] = {1.0, -2.0, 1.0};
  CMatrix h(nx + 2, ny + 2);
  const double scale = 1.0 / (dx * dy);
  for (std::size_t r = 0; r < nx + 2; ++r)
    for (std::size_t c = 0; c < ny + 2; ++c) {
      const auto i = static_cast<std::ptrdiff_t>(r) - 1, j = static_cast<std::ptrdiff_t>(c) - 1;
      cplx s{0.0, 0.0};
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) s += w[di + 1] * w[dj + 1] * at(i + di, j + dj);
      h(r, c) = s * scale;
    }
  return h;
}

inline CMatrix bilinear_h(const CMatrix& values, double d) { return bilinear_h(values, d, d); }

// ---------------------------------------------------------------------------
// Tensor layered form

struct Layer2D {
  int px = 0;
  int py = 0;
  CMatrix weights;  // weights(i, j) multiplies f_px(x - a_i) f_py(y - b_j)
};

/// phi(x, y) = sum over layers and junctions of w_ij f_px(x - a_i) f_py(y - b_j).
class EvolvableForm2D {
 public:
  EvolvableForm2D() = default;
  EvolvableForm2D(std::vector<double> ax, std::vector<double> ay, std::vector<Layer2D> layers)
      : ax_(std::move(ax)), ay_(std::move(ay)), layers_(std::move(layers)) {
    detail::check_junctions(ax_, 1);
    detail::check_junctions(ay_, 1);
    for (const auto& l : layers_) {
      if (l.px < 0 || l.py < 0) throw construction_error("layer degrees must be non-negative");
      if (l.px > kMaxAntiderivativeOrder || l.py > kMaxAntiderivativeOrder)
        throw capability_error("layer degree above N_MAX");
      if (l.weights.rows() != ax_.size() || l.weights.cols() != ay_.size())
        throw construction_error("layer weights do not match the junction grid");
      max_px_ = std::max(max_px_, l.px);
      max_py_ = std::max(max_py_, l.py);
    }
  }

  const std::vector<double>& ax() const { return ax_; }
  const std::vector<double>& ay() const { return ay_; }
  const std::vector<Layer2D>& layers() const { return layers_; }
  int max_px() const { return max_px_; }
  int max_py() const { return max_py_; }
  double extent() const { return std::max(ax_.back() - ax_.front(), ay_.back() - ay_.front()); }

  const Layer2D* layer(int px, int py) const {
    for (const auto& l : layers_)
      if (l.px == px && l.py == py) return &l;
    return nullptr;
  }

  cplx operator()(double x, double y) const {
    cplx v{0.0, 0.0};
    for (const auto& l : layers_)
      for (std::size_t i = 0; i < ax_.size(); ++i) {
        const double fx = f_n(l.px, x - ax_[i]);
        if (fx == 0.0) continue;
        for (std::size_t j = 0; j < ay_.size(); ++j) v += l.weights(i, j) * fx * f_n(l.py, y - ay_[j]);
      }
    return v;
  }

 private:
  std::vector<double> ax_, ay_;
  std::vector<Layer2D> layers_;
  int max_px_ = 0, max_py_ = 0;
};

inline EvolvableForm2D bilinear_form(const GridSpline2D& g) {
  const double dx = detail::uniform_spacing(g.x, "x");
  const double dy = detail::uniform_spacing(g.y, "y");
  auto ax = detail::uniform_axis(g.x.front() - dx, dx, g.x.size() + 2);
  auto ay = detail::uniform_axis(g.y.front() - dy, dy, g.y.size() + 2);
  return EvolvableForm2D(std::move(ax), std::move(ay), {Layer2D{1, 1, bilinear_h(g.values, dx, dy)}});
}

/// Tensor product phi_x(x) phi_y(y) of two 1D layered forms.
inline EvolvableForm2D product_form(const EvolvableForm1D& fx, const EvolvableForm1D& fy) {
  std::vector<Layer2D> layers;
  for (const auto& lx : fx.layers())
    for (const auto& ly : fy.layers()) {
      CMatrix w(fx.junctions().size(), fy.junctions().size());
      for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) = lx.weights[i] * ly.weights[j];
      layers.push_back({lx.degree, ly.degree, std::move(w)});
    }
  return EvolvableForm2D(fx.junctions(), fy.junctions(), std::move(layers));
}

namespace detail {

/// table[i][k] = chi_k(p - a_i, t), k = 0..top.
inline std::vector<std::array<cplx, kMaxAntiderivativeOrder + 1>> kernel_table(
    const std::vector<double>& a, double p, int top, double t, double t_eps, const PhysicalUnits& units) {
  std::vector<std::array<cplx, kMaxAntiderivativeOrder + 1>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = chi_family(top, p - a[i], t, units, t_eps);
  return out;
}

}  // namespace detail

inline cplx evolve_free(const EvolvableForm2D& form, double x, double y, double t, const PhysicalUnits& units = {}) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(t)) throw domain_error("evolve: non-finite argument");
  if (t < 0.0) throw domain_error("evolve: negative time");
  const double t_eps = small_time_cutoff(units, form.extent());
  if (t < t_eps) return form(x, y);
  const auto kx = detail::kernel_table(form.ax(), x, form.max_px(), t, t_eps, units);
  const auto ky = detail::kernel_table(form.ay(), y, form.max_py(), t, t_eps, units);
  cplx v{0.0, 0.0};
  for (const auto& l : form.layers())
    for (std::size_t i = 0; i < kx.size(); ++i) {
      cplx row{0.0, 0.0};
      for (std::size_t j = 0; j < ky.size(); ++j) row += l.weights(i, j) * ky[j][l.py];
      v += kx[i][l.px] * row;
    }
  return v;
}

/// Free or oscillator evolution; the oscillator map acts on each axis.
inline cplx evolve(const EvolvableForm2D& form, double x, double y, double t, const PhysicalUnits& units = {}) {
  if (!units.is_oscillator()) return evolve_free(form, x, y, t, units);
  const OscillatorMap map(t, units);
  return map.axis_factor(x) * map.axis_factor(y) *
         evolve_free(form, map.free_coordinate(x), map.free_coordinate(y), map.free_time, units);
}

/// Free evolution on the tensor grid xs x ys. With `strip_chirp` the common
/// factor exp(i m (x^2 + y^2) / (2 hbar t)) is divided out, leaving a field
/// that varies on the scale hbar t / (m * extent); |psi| is unaffected.
inline CMatrix evolve_free_grid(const EvolvableForm2D& form, const std::vector<double>& xs,
                                const std::vector<double>& ys, double t, const PhysicalUnits& units = {},
                                bool strip_chirp = false) {
  if (t < 0.0) throw domain_error("evolve: negative time");
  const double t_eps = small_time_cutoff(units, form.extent());
  const bool initial = t < t_eps;
  auto axis_tables = [&](const std::vector<double>& ps, const std::vector<double>& a, int top) {
    std::vector<Eigen::MatrixXcd> tab(top + 1, Eigen::MatrixXcd(ps.size(), a.size()));
    const double scale = initial ? 0.0 : std::sqrt(units.m() / (pi * units.hbar() * t));
    for (std::size_t r = 0; r < ps.size(); ++r) {
      const cplx strip = strip_chirp && !initial ? std::conj(detail::unit_phase(ps[r] * scale)) : cplx{1.0, 0.0};
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::array<cplx, kMaxAntiderivativeOrder + 1> k{};
        if (initial)
          for (int p = 0; p <= top; ++p) k[p] = f_n(p, ps[r] - a[i]);
        else
          k = chi_family(top, ps[r] - a[i], t, units, t_eps);
        for (int p = 0; p <= top; ++p) tab[p](r, i) = strip * k[p];
      }
    }
    return tab;
  };
  const auto tx = axis_tables(xs, form.ax(), form.max_px());
  const auto ty = axis_tables(ys, form.ay(), form.max_py());
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(xs.size(), ys.size());
  for (const auto& l : form.layers()) {
    Eigen::MatrixXcd w(l.weights.rows(), l.weights.cols());
    for (std::size_t i = 0; i < l.weights.rows(); ++i)
      for (std::size_t j = 0; j < l.weights.cols(); ++j) w(i, j) = l.weights(i, j);
    psi.noalias() += tx[l.px] * w * ty[l.py].transpose();
  }
  CMatrix out(xs.size(), ys.size());
  for (std::size_t r = 0; r < xs.size(); ++r)
    for (std::size_t c = 0; c < ys.size(); ++c) out(r, c) = psi(r, c);
  return out;
}

// ---------------------------------------------------------------------------
// Fourier transform and asymptote

/// Phi(kx, ky) = (2 pi)^{-1} int exp(-i kx x - i ky y) phi. For each y-layer
/// and y-junction the x-sum is itself a compactly supported 1D form, so the
/// transform is taken axis by axis with the near-zero series on each.
inline cplx fourier2d(const EvolvableForm2D& form, double kx, double ky) {
  if (!std::isfinite(kx) || !std::isfinite(ky)) throw domain_error("fourier: non-finite wavenumber");
  std::vector<Layer> ylayers;
  for (int q = 0; q <= form.max_py(); ++q) {
    Layer yl{q, std::vector<cplx>(form.ay().size())};
    bool any = false;
    for (std::size_t j = 0; j < form.ay().size(); ++j) {
      std::vector<Layer> xlayers;
      for (const auto& l : form.layers()) {
        if (l.py != q) continue;
        Layer xl{l.px, std::vector<cplx>(form.ax().size())};
        for (std::size_t i = 0; i < form.ax().size(); ++i) xl.weights[i] = l.weights(i, j);
        xlayers.push_back(std::move(xl));
      }
      if (xlayers.empty()) continue;
      any = true;
      yl.weights[j] = detail::layer_transform(form.ax(), xlayers, kx);
    }
    if (any) ylayers.push_back(std::move(yl));
  }
  return detail::layer_transform(form.ay(), ylayers, ky) / (2.0 * pi);
}

/// Far-field form (m / i hbar t) exp(i m R^2 / 2 hbar t) Phi_c(m X / hbar t, m Y / hbar t)
/// about the centre (cx, cy); Phi_c is the transform of the re-centred function.
inline cplx asymptotic2d(const EvolvableForm2D& form, double x, double y, double t, const PhysicalUnits& units = {},
                         double cx = 0.0, double cy = 0.0) {
  if (!(t > 0.0)) throw domain_error("asymptote: time must be positive");
  const double X = x - cx, Y = y - cy;
  const double mh = units.m() / (units.hbar() * t);
  const double s = std::sqrt(mh / pi);
  const cplx phase = detail::unit_phase(X * s) * detail::unit_phase(Y * s);
  const double kx = mh * X, ky = mh * Y;
  const double shift = kx * cx + ky * cy;
  return (mh / I) * phase * cplx{std::cos(shift), std::sin(shift)} * fourier2d(form, kx, ky);
}

// ---------------------------------------------------------------------------
// Biquadratic splines

/// Biquadratic cell polynomials on a uniform grid. Cell (i, j) spans
/// [x_i, x_{i+1}] x [y_j, y_{j+1}] and stores c[3p + q], the coefficient of
/// u^p v^q in the normalised local coordinates u = (x - x_i)/dx, v = (y - y_j)/dy.
struct BiquadraticSpline {
  using Cell = std::array<cplx, 9>;
  std::vector<double> x;
  std::vector<double> y;
  Matrix2<char> occupied;
  Matrix2<Cell> cells;

  /// d^p/dx^p d^q/dy^q of cell (i, j) at local (u, v).
  cplx cell_derivative(std::size_t i, std::size_t j, int p, int q, double u, double v) const {
    if (!occupied(i, j)) return {0.0, 0.0};
    const double dx = x[i + 1] - x[i], dy = y[j + 1] - y[j];
    poly::Coeffs cu(3);
    for (int a = 0; a < 3; ++a) {
      poly::Coeffs cv{cells(i, j)[3 * a], cells(i, j)[3 * a + 1], cells(i, j)[3 * a + 2]};
      cu[a] = poly::derivative(cv, q, v);
    }
    return poly::derivative(cu, p, u) / (std::pow(dx, p) * std::pow(dy, q));
  }

  cplx operator()(double px, double py) const {
    if (px < x.front() || px >= x.back() || py < y.front() || py >= y.back()) return {0.0, 0.0};
    const auto i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), px) - x.begin()) - 1;
    const auto j = static_cast<std::size_t>(std::upper_bound(y.begin(), y.end(), py) - y.begin()) - 1;
    return cell_derivative(i, j, 0, 0, (px - x[i]) / (x[i + 1] - x[i]), (py - y[j]) / (y[j + 1] - y[j]));
  }
};

struct BiquadraticInput {
  std::vector<double> x;
  std::vector<double> y;
  CMatrix values;
  std::optional<CMatrix> phi_x;  // derived from 1D lines when absent
  std::optional<CMatrix> phi_y;
  Matrix2<char> occupied;        // (nx-1) x (ny-1); empty means every cell
  std::size_t seed_i = 0;        // junction where phi_xy is given
  std::size_t seed_j = 0;
  cplx seed_xy{0.0, 0.0};
};

struct BiquadraticResult {
  BiquadraticSpline spline;
  EvolvableForm2D form;
  CMatrix phi_x;
  CMatrix phi_y;
  CMatrix phi_xy;

  /// Named layers of a biquadratic form; missing layers read as zero.
  CMatrix weights(int px, int py) const {
    if (const auto* l = form.layer(px, py)) return l->weights;
    return CMatrix(form.ax().size(), form.ay().size());
  }
  CMatrix h() const { return weights(2, 2); }
  CMatrix k() const { return weights(1, 1); }
  CMatrix cx() const { return weights(1, 2); }  // f_1(x) f_2(y)
  CMatrix cy() const { return weights(2, 1); }  // f_2(x) f_1(y)
};

/// phi_x along every grid line y = y_j and phi_y along every x = x_i, from
/// the 1D quadratic splines through the junction values with zero slope at
/// the first junction of each line.
inline std::pair<CMatrix, CMatrix> derivatives_from_lines(const std::vector<double>& x, const std::vector<double>& y,
                                                          const CMatrix& values) {
  const std::size_t nx = x.size(), ny = y.size();
  CMatrix dx(nx, ny), dy(nx, ny);
  for (std::size_t j = 0; j < ny; ++j) {
    std::vector<cplx> line(nx);
    for (std::size_t i = 0; i < nx; ++i) line[i] = values(i, j);
    const auto s = build_spline(x, line, 2);
    for (std::size_t i = 0; i < nx; ++i) dx(i, j) = i + 1 < nx ? s.right_limit(i, 1) : s.left_limit(i, 1);
  }
  for (std::size_t i = 0; i < nx; ++i) {
    std::vector<cplx> line(ny);
    for (std::size_t j = 0; j < ny; ++j) line[j] = values(i, j);
    const auto s = build_spline(y, line, 2);
    for (std::size_t j = 0; j < ny; ++j) dy(i, j) = j + 1 < ny ? s.right_limit(j, 1) : s.left_limit(j, 1);
  }
  return {dx, dy};
}

namespace detail {

// d^r/du^r d^s/dv^s of u^p v^q at a corner (u, v) in {0, 1}^2.
inline double monomial_derivative(int p, int q, int r, int s, int u, int v) {
  auto axis = [](int p, int r, int at) {
    if (r > p) return 0.0;
    if (at == 0 && p != r) return 0.0;
    double f = 1.0;
    for (int k = 0; k < r; ++k) f *= static_cast<double>(p - k);
    return f;
  };
  return axis(p, r, u) * axis(q, s, v);
}

}  // namespace detail

/// Recovers the regular biquadratic spline consistent with the junction
/// values, first derivatives and one seed cross derivative, then reads its
/// layered form off the cell polynomials. Each cell is solved once one of its
/// corners carries a known phi_xy; the cross derivatives it produces are
/// passed on to neighbours and must agree wherever they meet.
inline BiquadraticResult biquadratic_extract(const BiquadraticInput& in) {
  const std::size_t nx = in.x.size(), ny = in.y.size();
  const double dx = detail::uniform_spacing(in.x, "x");
  const double dy = detail::uniform_spacing(in.y, "y");
  if (in.values.rows() != nx || in.values.cols() != ny) throw construction_error("value grid does not match axes");
  if (in.seed_i >= nx || in.seed_j >= ny) throw construction_error("seed junction outside the grid");

  Matrix2<char> occ = in.occupied;
  if (occ.rows() == 0) occ = Matrix2<char>(nx - 1, ny - 1, 1);
  if (occ.rows() != nx - 1 || occ.cols() != ny - 1) throw construction_error("occupancy must be (nx-1) x (ny-1)");

  CMatrix px, py;
  if (in.phi_x && in.phi_y) {
    px = *in.phi_x;
    py = *in.phi_y;
    if (px.rows() != nx || px.cols() != ny || py.rows() != nx || py.cols() != ny)
      throw construction_error("derivative grids do not match axes");
  } else {
    std::tie(px, py) = derivatives_from_lines(in.x, in.y, in.values);
    if (in.phi_x) px = *in.phi_x;
    if (in.phi_y) py = *in.phi_y;
  }

  double scale = 0.0;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      scale = std::max({scale, std::abs(in.values(i, j)), std::abs(px(i, j)) * dx, std::abs(py(i, j)) * dy});
  scale = std::max(scale, std::abs(in.seed_xy) * dx * dy);
  const double tol = 1e-9 * (scale > 0.0 ? scale : 1.0);

  Matrix2<std::optional<cplx>> xy(nx, ny);  // phi_xy * dx * dy
  xy(in.seed_i, in.seed_j) = in.seed_xy * dx * dy;

  BiquadraticSpline spline{in.x, in.y, occ, Matrix2<BiquadraticSpline::Cell>(nx - 1, ny - 1)};
  Matrix2<char> solved(nx - 1, ny - 1, 0);
  static constexpr int corners[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};

  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t cj = 0; cj + 1 < ny; ++cj)
      for (std::size_t ci = 0; ci + 1 < nx; ++ci) {
        if (!occ(ci, cj) || solved(ci, cj)) continue;
        bool seeded = false;
        for (const auto& c : corners) seeded = seeded || xy(ci + c[0], cj + c[1]).has_value();
        if (!seeded) continue;

        std::vector<std::array<double, 9>> rows;
        std::vector<cplx> rhs;
        auto add = [&](int r, int s, int u, int v, cplx value) {
          std::array<double, 9> row{};
          for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) row[3 * p + q] = detail::monomial_derivative(p, q, r, s, u, v);
          rows.push_back(row);
          rhs.push_back(value);
        };
        for (const auto& c : corners) {
          const std::size_t i = ci + c[0], j = cj + c[1];
          add(0, 0, c[0], c[1], in.values(i, j));
          add(1, 0, c[0], c[1], px(i, j) * dx);
          add(0, 1, c[0], c[1], py(i, j) * dy);
          if (xy(i, j)) add(1, 1, c[0], c[1], *xy(i, j));
        }
        Eigen::MatrixXcd A(rows.size(), 9);
        Eigen::VectorXcd b(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
          for (int k = 0; k < 9; ++k) A(r, k) = rows[r][k];
          b(r) = rhs[r];
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
        qr.setThreshold(1e-10);
        if (qr.rank() < 9)
          throw no_regular_spline_error("biquadratic cell (" + std::to_string(ci) + ", " + std::to_string(cj) +
                                            ") is underdetermined",
                                        ci, cj);
        const Eigen::VectorXcd sol = qr.solve(b);
        const double resid = (A * sol - b).cwiseAbs().maxCoeff();
        if (!(resid <= tol))
          throw no_regular_spline_error("no regular biquadratic spline fits cell (" + std::to_string(ci) + ", " +
                                            std::to_string(cj) + "): residual " + std::to_string(resid),
                                        ci, cj);
        auto& cell = spline.cells(ci, cj);
        for (int k = 0; k < 9; ++k) cell[k] = sol(k);
        for (const auto& c : corners) {
          cplx cross{0.0, 0.0};
          for (int p = 1; p < 3; ++p)
            for (int q = 1; q < 3; ++q) cross += cell[3 * p + q] * detail::monomial_derivative(p, q, 1, 1, c[0], c[1]);
          auto& known = xy(ci + c[0], cj + c[1]);
          if (known && std::abs(*known - cross) > tol)
            throw no_regular_spline_error("cross derivative mismatch at junction (" + std::to_string(ci + c[0]) +
                                              ", " + std::to_string(cj + c[1]) + ") from cell (" + std::to_string(ci) +
                                              ", " + std::to_string(cj) + ")",
                                          ci, cj);
          if (!known) known = cross;
        }
        solved(ci, cj) = 1;
        progress = true;
      }
  }
  for (std::size_t cj = 0; cj + 1 < ny; ++cj)
    for (std::size_t ci = 0; ci + 1 < nx; ++ci)
      if (occ(ci, cj) && !solved(ci, cj))
        throw no_regular_spline_error("cell (" + std::to_string(ci) + ", " + std::to_string(cj) +
                                          ") is not connected to the seed junction",
                                      ci, cj);

  // Layered form: for each (p, q) the signed quadrant sum of d^p_x d^q_y at
  // every junction; rounding-level entries are cleared per layer.
  std::vector<Layer2D> layers;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      CMatrix w(nx, ny);
      double lscale = 0.0;
      for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
          cplx sum{0.0, 0.0};
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              // a = 1: cell to the right of the junction, b = 1: above.
              if ((a == 0 && i == 0) || (b == 0 && j == 0) || (a == 1 && i + 1 == nx) || (b == 1 && j + 1 == ny))
                continue;
              const std::size_t ci = a == 1 ? i : i - 1, cj = b == 1 ? j : j - 1;
              const cplx d = spline.cell_derivative(ci, cj, p, q, a == 1 ? 0.0 : 1.0, b == 1 ? 0.0 : 1.0);
              lscale = std::max(lscale, std::abs(d));
              sum += (a == b ? 1.0 : -1.0) * d;
            }
          w(i, j) = sum;
        }
      bool any = false;
      for (auto& v : w.data()) {
        if (std::abs(v) <= 1e-11 * lscale) v = 0.0;
        any = any || v != 0.0;
      }
      if (any) layers.push_back({p, q, std::move(w)});
    }

  CMatrix pxy(nx, ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) pxy(i, j) = xy(i, j).value_or(cplx{}) / (dx * dy);
  EvolvableForm2D form(in.x, in.y, std::move(layers));
  return {std::move(spline), std::move(form), std::move(px), std::move(py), std::move(pxy)};
}

// ---------------------------------------------------------------------------
// Moments

/// Norm squared and centre of a 2D layered form, integrated exactly cell by
/// cell with 3-point Gauss-Legendre (the integrands are at most quintic per
/// axis for forms up to biquadratic).
struct Moments2D {
  double norm2 = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

inline Moments2D moments(const EvolvableForm2D& form) {
  static constexpr double node[3] = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
  static constexpr double weight[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  if (form.max_px() > 2 || form.max_py() > 2) throw capability_error("2D moments limited to biquadratic forms");
  Moments2D m;
  double sx = 0.0, sy = 0.0;
  const auto& ax = form.ax();
  const auto& ay = form.ay();
  for (std::size_t i = 0; i + 1 < ax.size(); ++i)
    for (std::size_t j = 0; j + 1 < ay.size(); ++j) {
      const double hx = 0.5 * (ax[i + 1] - ax[i]), hy = 0.5 * (ay[j + 1] - ay[j]);
      const double mx = 0.5 * (ax[i + 1] + ax[i]), my = 0.5 * (ay[j + 1] + ay[j]);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double x = mx + hx * node[a], y = my + hy * node[b];
          const double w = weight[a] * weight[b] * hx * hy;
          const double d = std::norm(form(x, y)) * w;
          m.norm2 += d;
          sx += x * d;
          sy += y * d;
        }
    }
  if (!(m.norm2 > 0.0)) throw degenerate_error("zero-norm spline has no centre");
  m.cx = sx / m.norm2;
  m.cy = sy / m.norm2;
  return m;
}

}  // namespace splinewave

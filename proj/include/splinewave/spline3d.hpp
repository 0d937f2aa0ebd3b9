#pragma once

// Trilinear splines on uniform 3D grids: the 27-point jump stencil and
// evolution as a sum of products of three chi_1 kernels.

#include <algorithm>
#include <array>

#include "splinewave/fresnel.hpp"
#include "splinewave/spline1d.hpp"
#include "splinewave/spline2d.hpp"

namespace splinewave {

struct GridSpline3D {
  std::vector<double> x, y, z;
  CArray3 values;

  GridSpline3D() = default;
  GridSpline3D(std::vector<double> gx, std::vector<double> gy, std::vector<double> gz, CArray3 v)
      : x(std::move(gx)), y(std::move(gy)), z(std::move(gz)), values(std::move(v)) {
    detail::check_junctions(x);
    detail::check_junctions(y);
    detail::check_junctions(z);
    if (values.nx() != x.size() || values.ny() != y.size() || values.nz() != z.size())
      throw construction_error("grid values do not match the axes");
  }

  /// Trilinear interpolant with zeros one spacing beyond each face.
  cplx trilinear(double px, double py, double pz) const {
    const auto cx = detail::padded_cell(x, px);
    const auto cy = detail::padded_cell(y, py);
    const auto cz = detail::padded_cell(z, pz);
    if (!cx || !cy || !cz) return {0.0, 0.0};
    auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t k) -> cplx {
      if (i < 0 || j < 0 || k < 0 || i >= static_cast<std::ptrdiff_t>(x.size()) ||
          j >= static_cast<std::ptrdiff_t>(y.size()) || k >= static_cast<std::ptrdiff_t>(z.size()))
        return {};
      return values(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    };
    const auto [i, u] = *cx;
    const auto [j, v] = *cy;
    const auto [k, w] = *cz;
    cplx s{0.0, 0.0};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) s += (a ? u : 1 - u) * (b ? v : 1 - v) * (c ? w : 1 - w) * at(i + a, j + b, k + c);
    return s;
  }
};

/// Jump weights of the trilinear interpolant on the grid padded by one
/// junction per side: the tensor product of [1, -2, 1] along each axis,
/// so -8 at the centre, +4 on faces, -2 on edges and +1 at corners.
inline CArray3 trilinear_h(const CArray3& values, double dx, double dy, double dz) {
  if (!(dx > 0.0) || !(dy > 0.0) || !(dz > 0.0)) throw construction_error("grid spacing must be positive");
  const auto nx = static_cast<std::ptrdiff_t>(values.nx()), ny = static_cast<std::ptrdiff_t>(values.ny()),
             nz = static_cast<std::ptrdiff_t>(values.nz());
  static constexpr double w[3] = {1.0, -2.0, 1.0};
  CArray3 h(values.nx() + 2, values.ny() + 2, values.nz() + 2);
  const double scale = 1.0 / (dx * dy * dz);
  for (std::ptrdiff_t i = -1; i <= nx; ++i)
    for (std::ptrdiff_t j = -1; j <= ny; ++j)
      for (std::ptrdiff_t k = -1; k <= nz; ++k) {
        cplx s{0.0, 0.0};
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj)
            for (int dk = -1; dk <= 1; ++dk) {
              const auto ii = i + di, jj = j + dj, kk = k + dk;
              if (ii < 0 || jj < 0 || kk < 0 || ii >= nx || jj >= ny || kk >= nz) continue;
              s += w[di + 1] * w[dj + 1] * w[dk + 1] * values(ii, jj, kk);
            }
        h(i + 1, j + 1, k + 1) = s * scale;
      }
  return h;
}

inline CArray3 trilinear_h(const CArray3& values, double d) { return trilinear_h(values, d, d, d); }

/// psi = sum_ijk h_ijk K(x - a_i) K(y - b_j) K(z - c_k) with K = f_1 at t = 0
/// and chi_1 afterwards.
class TrilinearForm {
 public:
  explicit TrilinearForm(const GridSpline3D& g) {
    const double dx = detail::uniform_spacing(g.x, "x");
    const double dy = detail::uniform_spacing(g.y, "y");
    const double dz = detail::uniform_spacing(g.z, "z");
    ax_ = detail::uniform_axis(g.x.front() - dx, dx, g.x.size() + 2);
    ay_ = detail::uniform_axis(g.y.front() - dy, dy, g.y.size() + 2);
    az_ = detail::uniform_axis(g.z.front() - dz, dz, g.z.size() + 2);
    h_ = trilinear_h(g.values, dx, dy, dz);
  }

  const CArray3& h() const { return h_; }
  const std::vector<double>& ax() const { return ax_; }
  const std::vector<double>& ay() const { return ay_; }
  const std::vector<double>& az() const { return az_; }
  double extent() const {
    return std::max({ax_.back() - ax_.front(), ay_.back() - ay_.front(), az_.back() - az_.front()});
  }

  cplx operator()(double x, double y, double z) const { return combine(table(ax_, x), table(ay_, y), table(az_, z)); }

  cplx evolve(double x, double y, double z, double t, const PhysicalUnits& units = {}) const {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) || !std::isfinite(t))
      throw domain_error("evolve: non-finite argument");
    if (t < 0.0) throw domain_error("evolve: negative time");
    const double t_eps = small_time_cutoff(units, extent());
    if (t < t_eps) return (*this)(x, y, z);
    auto kern = [&](const std::vector<double>& a, double p) {
      std::vector<cplx> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = chi_family(1, p - a[i], t, units, t_eps)[1];
      return out;
    };
    return combine(kern(ax_, x), kern(ay_, y), kern(az_, z));
  }

 private:
  static std::vector<cplx> table(const std::vector<double>& a, double p) {
    std::vector<cplx> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f_n(1, p - a[i]);
    return out;
  }

  cplx combine(const std::vector<cplx>& kx, const std::vector<cplx>& ky, const std::vector<cplx>& kz) const {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < kx.size(); ++i) {
      cplx sy{0.0, 0.0};
      for (std::size_t j = 0; j < ky.size(); ++j) {
        cplx sz{0.0, 0.0};
        for (std::size_t k = 0; k < kz.size(); ++k) sz += h_(i, j, k) * kz[k];
        sy += ky[j] * sz;
      }
      s += kx[i] * sy;
    }
    return s;
  }

  std::vector<double> ax_, ay_, az_;
  CArray3 h_;
};

inline cplx evolve(const TrilinearForm& form, double x, double y, double z, double t, const PhysicalUnits& units = {}) {
  if (!units.is_oscillator()) return form.evolve(x, y, z, t, units);
  const OscillatorMap map(t, units);
  return map.axis_factor(x) * map.axis_factor(y) * map.axis_factor(z) *
         form.evolve(map.free_coordinate(x), map.free_coordinate(y), map.free_coordinate(z), map.free_time, units);
}

}  // namespace splinewave

#pragma once

// Named reference wave functions. `a` is the length scale of each shape.

#include <functional>
#include <string>
#include <string_view>

#include "splinewave/spline1d.hpp"
#include "splinewave/spline2d.hpp"

namespace splinewave::fixtures {

/// 1 on (-a, a).
inline Spline1D square(double a = 1.0) { return build_spline({-a, a}, {1.0}, 0); }

/// Isosceles triangle of base 2a and height 1.
inline Spline1D triangle(double a = 1.0) { return build_spline({-a, 0.0, a}, {0.0, 1.0, 0.0}, 1); }

/// Height 1 on [-a, a], linear ramps of width b either side.
inline Spline1D trapezium(double a = 1.0, double b = 1.0) {
  return build_spline({-a - b, -a, a, a + b}, {0.0, 1.0, 1.0, 0.0}, 1);
}

/// Pure quadratic: 1 - x^2/2a^2 for |x| < a, (2a - |x|)^2 / 2a^2 for a < |x| < 2a.
inline Spline1D smooth_hump(double a = 1.0) {
  return build_spline({-2 * a, -a, a, 2 * a}, {0.0, 0.5, 0.5, 0.0}, 2);
}

/// 1 - x^2/a^2 on (-a, a); the slope jumps at both ends.
inline Spline1D truncated_quadratic(double a = 1.0) {
  return build_spline({-a, a}, {0.0, 0.0}, 2, {2.0 / a});
}

/// Radial profiles psi(r) on [0, a]; evolve their odd_extension.
inline Spline1D cubic_radial(double a = 1.0) { return Spline1D({0.0, a}, {{1.0, 0.0, -1.0 / (a * a)}}); }
inline Spline1D cone_radial(double a = 1.0) { return Spline1D({0.0, a}, {{1.0, -1.0 / a}}); }

/// Bilinear samples of 1 - r^2/a^2 (zero beyond r = a) on a square grid of
/// spacing a/5 covering [-a, a]^2.
inline GridSpline2D disk_bilinear(double a = 1.0) {
  const auto axis = detail::uniform_axis(-a, a / 5.0, 11);
  CMatrix v(11, 11);
  for (std::size_t i = 0; i < 11; ++i)
    for (std::size_t j = 0; j < 11; ++j) v(i, j) = std::max(0.0, 1.0 - (axis[i] * axis[i] + axis[j] * axis[j]) / (a * a));
  return GridSpline2D(axis, axis, std::move(v));
}

// ---------------------------------------------------------------------------
// Biquadratic corner-indent example on the grid (-1, 0, 1, 2)^2 with the
// cell [-1, 0]^2 removed. Values vanish on the frame except
// phi(1, 0) = phi(0, 1) = 1 and phi(1, 1) = 7/4; phi_xy(0, 0) = 0.

inline BiquadraticInput corner_indent() {
  BiquadraticInput in;
  in.x = {-1.0, 0.0, 1.0, 2.0};
  in.y = in.x;
  in.values = CMatrix(4, 4);
  in.values(2, 1) = 1.0;
  in.values(1, 2) = 1.0;
  in.values(2, 2) = 1.75;
  in.occupied = Matrix2<char>(3, 3, 1);
  in.occupied(0, 0) = 0;
  in.seed_i = 1;
  in.seed_j = 1;
  in.seed_xy = 0.0;
  return in;
}

struct ReferenceCell {
  std::string name;
  std::size_t i, j;  // cell index
  std::function<double(double, double)> f;
};

/// Closed-form cell polynomials of the corner-indent example. The L cells are
/// the R cells with x and y exchanged.
inline std::vector<ReferenceCell> corner_indent_cells() {
  auto R1 = [](double x, double y) { return x * x * (1 + y) * (1 + y); };
  auto R2 = [](double x, double y) { return (2 - x) * (3 * x - 2) * (1 + y) * (1 + y); };
  auto R3 = [](double x, double y) {
    return 0.25 * (x - 2) * (8 - 12 * x + 16 * y - 24 * x * y - 26 * y * y + 31 * x * y * y);
  };
  auto C1 = [](double x, double y) { return x * x + y * y + 2 * (x * x * y + x * y * y) - 4.25 * x * x * y * y; };
  auto C2 = [](double x, double y) { return 0.25 * (2 - x) * (y - 2) * (36 - 38 * (x + y) + 33 * x * y); };
  return {
      {"R1", 1, 0, R1},
      {"R2", 2, 0, R2},
      {"R3", 2, 1, R3},
      {"C1", 1, 1, C1},
      {"C2", 2, 2, C2},
      {"L1", 0, 1, [=](double x, double y) { return R1(y, x); }},
      {"L2", 0, 2, [=](double x, double y) { return R2(y, x); }},
      {"L3", 1, 2, [=](double x, double y) { return R3(y, x); }},
  };
}

/// smooth_hump(x) * truncated_quadratic(y) on the uniform grid a(-2..2) x
/// a(-1..1) with exact first derivatives.
inline BiquadraticInput product_2d(double a = 1.0) {
  const auto hump = smooth_hump(a);
  const auto tq = truncated_quadratic(a);
  BiquadraticInput in;
  in.x = detail::uniform_axis(-2 * a, a, 5);
  in.y = detail::uniform_axis(-a, a, 3);
  in.values = CMatrix(5, 3);
  CMatrix px(5, 3), py(5, 3);
  auto slope = [](const Spline1D& s, double x) {
    // one-sided derivative from inside the support; continuous inside
    return x >= s.right() ? s.derivative(1, std::nextafter(x, -1e300)) : s.derivative(1, std::nextafter(x, 1e300));
  };
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      in.values(i, j) = hump(in.x[i]) * tq(in.y[j]);
      px(i, j) = slope(hump, in.x[i]) * tq(in.y[j]);
      py(i, j) = hump(in.x[i]) * slope(tq, in.y[j]);
    }
  in.phi_x = px;
  in.phi_y = py;
  in.seed_i = 0;
  in.seed_j = 0;
  in.seed_xy = slope(hump, in.x[0]) * slope(tq, in.y[0]);
  return in;
}

inline constexpr std::string_view names[] = {"square",       "triangle",     "trapezium",   "smooth-hump",
                                             "truncated-quadratic", "cubic-radial", "cone-radial", "disk-bilinear",
                                             "corner-indent", "product-2d"};

/// Fixture lookup for the 1D shapes by name; throws for other names.
inline Spline1D line_fixture(std::string_view name, double a = 1.0, double b = 1.0) {
  if (name == "square") return square(a);
  if (name == "triangle") return triangle(a);
  if (name == "trapezium") return trapezium(a, b);
  if (name == "smooth-hump") return smooth_hump(a);
  if (name == "truncated-quadratic") return truncated_quadratic(a);
  if (name == "cubic-radial") return cubic_radial(a);
  if (name == "cone-radial") return cone_radial(a);
  throw construction_error("no 1D fixture named '" + std::string(name) + "'");
}

}  // namespace splinewave::fixtures

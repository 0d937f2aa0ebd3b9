#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace splinewave {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = std::numbers::pi;

/// Principal square root of i, e^{i pi/4}. Every sqrt(i ...) factor in the
/// library uses this branch.
inline const cplx sqrt_i{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};

// ---------------------------------------------------------------------------
// Errors. Everything thrown by the library derives from splinewave::error.

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (non-finite z, t < 0, r <= 0, ...).
struct domain_error : error {
  using error::error;
};

/// Request beyond what is implemented (n > N_MAX, unequal spacing for stencils).
struct capability_error : error {
  using error::error;
};

/// Kernel evaluated at t == 0.
struct singular_time_error : domain_error {
  using domain_error::domain_error;
};

/// Oscillator time at or past the first caustic, omega * tau >= pi/2.
struct caustic_error : domain_error {
  using domain_error::domain_error;
};

/// Invalid spline input (junction ordering, endpoint values, sizes).
struct construction_error : error {
  using error::error;
};

/// A constructed object violates a structural requirement (compact support).
struct validation_error : error {
  using error::error;
};

/// Zero-norm spline where a normalised quantity was requested.
struct degenerate_error : error {
  using error::error;
};

/// Quadrature requested where the kernel oscillates too fast to resolve.
struct infeasible_error : error {
  using error::error;
};

/// The biquadratic march met data that no regular spline can satisfy.
struct no_regular_spline_error : error {
  no_regular_spline_error(const std::string& what, std::size_t cell_i, std::size_t cell_j)
      : error(what), cell_i(cell_i), cell_j(cell_j) {}
  std::size_t cell_i;
  std::size_t cell_j;
};

// ---------------------------------------------------------------------------

/// Mass, reduced Planck constant and (for oscillator runs) angular frequency.
/// omega == 0 selects free dynamics.
class PhysicalUnits {
 public:
  PhysicalUnits() = default;
  PhysicalUnits(double m, double hbar, double omega = 0.0) : m_(m), hbar_(hbar), omega_(omega) {
    if (!(m > 0.0) || !std::isfinite(m)) throw domain_error("mass must be positive and finite");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw domain_error("hbar must be positive and finite");
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw domain_error("omega must be non-negative and finite");
  }

  double m() const { return m_; }
  double hbar() const { return hbar_; }
  double omega() const { return omega_; }
  bool is_oscillator() const { return omega_ > 0.0; }

  /// Oscillator length sqrt(hbar / (m omega)).
  double alpha() const {
    if (!is_oscillator()) throw domain_error("alpha is defined only for omega > 0");
    return std::sqrt(hbar_ / (m_ * omega_));
  }

  /// Natural time unit m L^2 / hbar for a length scale L.
  double time_scale(double length) const { return m_ * length * length / hbar_; }

 private:
  double m_ = 1.0;
  double hbar_ = 1.0;
  double omega_ = 0.0;
};

/// Dense row-major matrix with value semantics. Index (i, j) is x-index i,
/// y-index j throughout the 2D code.
template <class T>
class Matrix2 {
 public:
  Matrix2() = default;
  Matrix2(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  friend bool operator==(const Matrix2&, const Matrix2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
class Array3 {
 public:
  Array3() = default;
  Array3(std::size_t nx, std::size_t ny, std::size_t nz, T fill = T{})
      : nx_(nx), ny_(ny), nz_(nz), data_(nx * ny * nz, fill) {}

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t nz() const { return nz_; }
  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * ny_ + j) * nz_ + k]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * ny_ + j) * nz_ + k]; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Array3&, const Array3&) = default;

 private:
  std::size_t nx_ = 0, ny_ = 0, nz_ = 0;
  std::vector<T> data_;
};

using CMatrix = Matrix2<cplx>;
using CArray3 = Array3<cplx>;

namespace detail {

inline bool all_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Coordinates x0 + i*d, i = 0..n-1 (computed from the index to avoid drift).
inline std::vector<double> uniform_axis(double x0, double d, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = x0 + static_cast<double>(i) * d;
  return x;
}

/// Common spacing of an axis, or throws capability_error if it is not uniform.
inline double uniform_spacing(const std::vector<double>& x, const char* axis) {
  if (x.size() < 2) throw construction_error(std::string("axis ") + axis + " needs at least two junctions");
  const double d = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - d) > 1e-9 * std::abs(d))
      throw capability_error(std::string("stencil extraction requires equal spacing along ") + axis);
  }
  return d;
}

}  // namespace detail

}  // namespace splinewave

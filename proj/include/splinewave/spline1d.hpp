#pragma once

// Compactly supported piecewise polynomials on a junction grid and their
// layered form: a sum of shifted delta antiderivatives f_k weighted by the
// jumps of the k-th derivative at each junction.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splinewave/core.hpp"
#include "splinewave/fresnel.hpp"
#include "splinewave/polynomial.hpp"

namespace splinewave {

namespace detail {

inline void check_junctions(const std::vector<double>& a, std::size_t min_count = 2) {
  if (a.size() < min_count)
    throw construction_error("need at least " + std::to_string(min_count) + " junctions, got " + std::to_string(a.size()));
  for (double v : a)
    if (!std::isfinite(v)) throw construction_error("junction coordinates must be finite");
  const double span = a.back() - a.front();
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (!(a[i] > a[i - 1])) throw construction_error("junctions must be strictly increasing");
    if (a[i] - a[i - 1] < 1e-12 * span) throw construction_error("junction spacing below 1e-12 of the span");
  }
}

}  // namespace detail

/// Piecewise polynomial, zero outside [a_1, a_n]. Segment j covers
/// [a_j, a_{j+1}] and is stored in the local variable u = x - a_j.
class Spline1D {
 public:
  Spline1D() = default;
  Spline1D(std::vector<double> junctions, std::vector<poly::Coeffs> segments)
      : a_(std::move(junctions)), seg_(std::move(segments)) {
    detail::check_junctions(a_);
    if (seg_.size() + 1 != a_.size())
      throw construction_error("expected " + std::to_string(a_.size() - 1) + " segments, got " +
                               std::to_string(seg_.size()));
    std::size_t width = 1;
    for (const auto& s : seg_) width = std::max(width, s.size());
    for (auto& s : seg_) {
      for (const auto& c : s)
        if (!detail::all_finite(c)) throw construction_error("segment coefficients must be finite");
      s.resize(width, cplx{0.0, 0.0});
    }
    degree_ = static_cast<int>(width) - 1;
    // Trim trailing all-zero orders so degree() is the true degree.
    while (degree_ > 0 && std::all_of(seg_.begin(), seg_.end(), [&](const auto& s) { return s[degree_] == 0.0; })) {
      --degree_;
      for (auto& s : seg_) s.pop_back();
    }
  }

  int degree() const { return degree_; }
  std::size_t junction_count() const { return a_.size(); }
  const std::vector<double>& junctions() const { return a_; }
  const std::vector<poly::Coeffs>& segments() const { return seg_; }
  double left() const { return a_.front(); }
  double right() const { return a_.back(); }
  double extent() const { return a_.back() - a_.front(); }

  /// Value at x. At a junction the two one-sided limits are averaged, which
  /// only matters where the spline is discontinuous.
  cplx operator()(double x) const { return derivative(0, x); }

  cplx derivative(int k, double x) const {
    if (x < a_.front() || x > a_.back()) return {0.0, 0.0};
    const auto it = std::lower_bound(a_.begin(), a_.end(), x);
    const auto j = static_cast<std::size_t>(it - a_.begin());
    if (it != a_.end() && *it == x) return 0.5 * (left_limit(j, k) + right_limit(j, k));
    return poly::derivative(seg_[j - 1], k, x - a_[j - 1]);
  }

  /// k-th derivative at junction j approached from the left / right.
  cplx left_limit(std::size_t j, int k) const {
    if (j == 0) return {0.0, 0.0};
    return poly::derivative(seg_[j - 1], k, a_[j] - a_[j - 1]);
  }
  cplx right_limit(std::size_t j, int k) const {
    if (j + 1 >= a_.size()) return {0.0, 0.0};
    return poly::derivative(seg_[j], k, 0.0);
  }

 private:
  std::vector<double> a_;
  std::vector<poly::Coeffs> seg_;
  int degree_ = 0;
};

enum class Purity {
  pure,     // only the top-order jumps are present
  regular,  // lower-order jumps only at the two end junctions
  impure,   // lower-order jumps at interior junctions
};

inline std::string_view to_string(Purity p) {
  switch (p) {
    case Purity::pure: return "pure";
    case Purity::regular: return "regular";
    case Purity::impure: return "impure";
  }
  return "?";
}

/// Weights of f_degree(x - a_i), one per junction of the owning form.
struct Layer {
  int degree = 0;
  std::vector<cplx> weights;
};

/// phi(x) = sum over layers k, junctions i of w_{k,i} f_k(x - a_i).
class EvolvableForm1D {
 public:
  EvolvableForm1D() = default;
  EvolvableForm1D(std::vector<double> junctions, std::vector<Layer> layers)
      : a_(std::move(junctions)), layers_(std::move(layers)) {
    if (!a_.empty()) detail::check_junctions(a_, 1);
    std::sort(layers_.begin(), layers_.end(), [](const Layer& l, const Layer& r) { return l.degree < r.degree; });
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const auto& l = layers_[i];
      if (l.degree < 0) throw construction_error("layer degree must be non-negative");
      if (l.degree > kMaxAntiderivativeOrder) throw capability_error("layer degree above N_MAX");
      if (l.weights.size() != a_.size()) throw construction_error("layer weight count differs from junction count");
      if (i > 0 && layers_[i - 1].degree == l.degree) throw construction_error("duplicate layer degree");
      for (const auto& w : l.weights)
        if (!detail::all_finite(w)) throw construction_error("layer weights must be finite");
    }
  }

  const std::vector<double>& junctions() const { return a_; }
  const std::vector<Layer>& layers() const { return layers_; }
  bool empty() const { return layers_.empty(); }
  int top_degree() const { return layers_.empty() ? 0 : layers_.back().degree; }
  double extent() const { return a_.size() < 2 ? 0.0 : a_.back() - a_.front(); }
  double center() const { return a_.empty() ? 0.0 : 0.5 * (a_.front() + a_.back()); }

  const Layer* layer(int degree) const {
    for (const auto& l : layers_)
      if (l.degree == degree) return &l;
    return nullptr;
  }

  cplx operator()(double x) const {
    cplx v{0.0, 0.0};
    for (const auto& l : layers_)
      for (std::size_t i = 0; i < a_.size(); ++i)
        if (l.weights[i] != 0.0) v += l.weights[i] * f_n(l.degree, x - a_[i]);
    return v;
  }

 private:
  std::vector<double> a_;
  std::vector<Layer> layers_;
};

// ---------------------------------------------------------------------------
// Construction

/// Builds the spline of the given degree through junction values.
///
/// degree 0: `values` holds one constant per segment (n - 1 entries).
/// degree s >= 1: `values` holds phi(a_j) for every junction, with both end
/// values zero; `seeds` gives phi', ..., phi^(s-1) at a_1 (missing entries
/// are zero). Each segment's top coefficient is fixed by the next junction
/// value and the derivatives carried over from the previous segment.
inline Spline1D build_spline(const std::vector<double>& junctions, const std::vector<cplx>& values, int degree,
                             const std::vector<cplx>& seeds = {}) {
  if (degree < 0) throw construction_error("degree must be non-negative");
  if (degree > kMaxAntiderivativeOrder) throw capability_error("degree above N_MAX");
  detail::check_junctions(junctions);
  for (const auto& v : values)
    if (!detail::all_finite(v)) throw construction_error("junction values must be finite");
  const std::size_t n = junctions.size();

  if (degree == 0) {
    if (values.size() != n - 1)
      throw construction_error("degree 0 takes one value per segment (" + std::to_string(n - 1) + ")");
    std::vector<poly::Coeffs> seg;
    for (const auto& v : values) seg.push_back({v});
    return Spline1D(junctions, std::move(seg));
  }

  if (values.size() != n)
    throw construction_error("expected " + std::to_string(n) + " junction values, got " + std::to_string(values.size()));
  if (seeds.size() > static_cast<std::size_t>(degree - 1))
    throw construction_error("at most " + std::to_string(degree - 1) + " seed derivatives for degree " +
                             std::to_string(degree));
  double vmax = 0.0;
  for (const auto& v : values) vmax = std::max(vmax, std::abs(v));
  if (std::abs(values.front()) > 1e-14 * vmax || std::abs(values.back()) > 1e-14 * vmax)
    throw construction_error("end values must be zero for compact support");
  const bool unseeded = std::all_of(seeds.begin(), seeds.end(), [](cplx s) { return s == 0.0; });
  if (unseeded && n < static_cast<std::size_t>(degree) + 1)
    throw construction_error("a pure spline of degree " + std::to_string(degree) + " needs at least " +
                             std::to_string(degree + 1) + " junctions");

  const int s = degree;
  // carried[k] = phi^(k)(a_j), k < s
  std::vector<cplx> carried(s, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < seeds.size(); ++k) carried[k + 1] = seeds[k];
  carried[0] = values.front();

  std::vector<poly::Coeffs> seg;
  seg.reserve(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double d = junctions[j + 1] - junctions[j];
    poly::Coeffs c(s + 1);
    cplx taylor{0.0, 0.0};
    double dp = 1.0;
    for (int k = 0; k < s; ++k) {
      c[k] = carried[k] / poly::factorial(k);
      taylor += c[k] * dp;
      dp *= d;
    }
    c[s] = (values[j + 1] - taylor) / dp;
    for (int k = 0; k < s; ++k) carried[k] = poly::derivative(c, k, d);
    carried[0] = values[j + 1];
    seg.push_back(std::move(c));
  }
  return Spline1D(junctions, std::move(seg));
}

/// Jumps of a piecewise-linear interpolant through (a_j, phi_j), with zero
/// values imposed beyond both ends.
inline std::vector<cplx> linear_jumps(const std::vector<double>& a, const std::vector<cplx>& phi) {
  detail::check_junctions(a);
  if (phi.size() != a.size()) throw construction_error("value count differs from junction count");
  const std::size_t n = a.size();
  std::vector<cplx> h(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx left = j == 0 ? cplx{} : (phi[j] - phi[j - 1]) / (a[j] - a[j - 1]);
    const cplx right = j + 1 == n ? cplx{} : (phi[j + 1] - phi[j]) / (a[j + 1] - a[j]);
    h[j] = right - left;
  }
  return h;
}

/// Junction values phi(a_j) = sum_i w_i f_s(a_j - a_i) of a single-layer form.
inline std::vector<cplx> values_from_weights(const std::vector<double>& a, const std::vector<cplx>& w, int degree) {
  if (w.size() != a.size()) throw construction_error("weight count differs from junction count");
  std::vector<cplx> phi(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t i = 0; i < a.size(); ++i) phi[j] += w[i] * f_n(degree, a[j] - a[i]);
  return phi;
}

// ---------------------------------------------------------------------------
// Layered form

/// Jump tables J[k][j] = phi^(k)(a_j+) - phi^(k)(a_j-), k = 0..degree, with
/// round-off sized jumps set to exactly zero.
inline std::vector<std::vector<cplx>> jump_table(const Spline1D& s) {
  const std::size_t n = s.junction_count();
  std::vector<std::vector<cplx>> jumps(s.degree() + 1, std::vector<cplx>(n));
  for (int k = 0; k <= s.degree(); ++k) {
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      scale = std::max({scale, std::abs(s.left_limit(j, k)), std::abs(s.right_limit(j, k))});
    for (std::size_t j = 0; j < n; ++j) {
      const cplx J = s.right_limit(j, k) - s.left_limit(j, k);
      jumps[k][j] = std::abs(J) <= 1e-11 * scale ? cplx{0.0, 0.0} : J;
    }
  }
  return jumps;
}

inline Purity classify(const Spline1D& s) {
  const auto jumps = jump_table(s);
  const std::size_t n = s.junction_count();
  Purity p = Purity::pure;
  for (int k = 0; k < s.degree(); ++k)
    for (std::size_t j = 0; j < n; ++j) {
      if (jumps[k][j] == 0.0) continue;
      if (j != 0 && j + 1 != n) return Purity::impure;
      p = Purity::regular;
    }
  return p;
}

/// Layered form of a spline. Junctions without any jump and layers without
/// any weight are dropped; the zero spline yields an empty form.
inline EvolvableForm1D evolvable_form(const Spline1D& s) {
  const auto jumps = jump_table(s);
  const auto& a = s.junctions();
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (const auto& row : jumps)
      if (row[j] != 0.0) {
        keep.push_back(j);
        break;
      }
  std::vector<double> kept_a;
  for (auto j : keep) kept_a.push_back(a[j]);
  std::vector<Layer> layers;
  for (int k = 0; k <= s.degree(); ++k) {
    Layer l{k, {}};
    bool any = false;
    for (auto j : keep) {
      l.weights.push_back(jumps[k][j]);
      any = any || jumps[k][j] != 0.0;
    }
    if (any) layers.push_back(std::move(l));
  }
  return EvolvableForm1D(std::move(kept_a), std::move(layers));
}

/// Piecewise-polynomial form of a layered form on its own junctions.
inline Spline1D to_spline(const EvolvableForm1D& form) {
  const auto& a = form.junctions();
  if (a.size() < 2) throw construction_error("a spline needs at least two junctions");
  const int top = form.top_degree();
  std::vector<poly::Coeffs> seg;
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    poly::Coeffs c(top + 1);
    for (const auto& l : form.layers()) {
      const int k = l.degree;
      const double norm = 0.5 / poly::factorial(k);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (l.weights[i] == 0.0) continue;
        // f_k(u + a_j - a_i) on the open segment: sign fixed by i <= j.
        const double sgn = i <= j ? 1.0 : -1.0;
        poly::Coeffs mono(k + 1);
        mono[k] = sgn * norm;
        const auto shifted = poly::shift(mono, a[j] - a[i]);
        for (int p = 0; p <= k; ++p) c[p] += l.weights[i] * shifted[p];
      }
    }
    seg.push_back(std::move(c));
  }
  return Spline1D(a, std::move(seg));
}

/// Residuals of the compact-support conditions of a layered form: for
/// m = 0..s (s the top degree), the x^m-moment of the weights summed across
/// layers must vanish. Each residual is judged against the largest term that
/// enters it.
struct MomentReport {
  struct Condition {
    int order = 0;
    cplx residual;
    double scale = 0.0;
    bool pass = false;
  };
  std::vector<Condition> conditions;
  bool pass = true;
};

inline MomentReport validate_moments(const EvolvableForm1D& form, double rel_tol = 1e-10) {
  MomentReport r;
  if (form.empty()) return r;
  const int s = form.top_degree();
  const auto& a = form.junctions();
  for (int m = 0; m <= s; ++m) {
    MomentReport::Condition c{m, {}, 0.0, false};
    for (const auto& l : form.layers()) {
      const int p = l.degree - s + m;  // power of a_i
      if (p < 0) continue;
      const double coef = ((s - l.degree) % 2 == 0 ? 1.0 : -1.0) * poly::factorial(m) / poly::factorial(p);
      for (std::size_t i = 0; i < a.size(); ++i) {
        const cplx term = coef * l.weights[i] * std::pow(a[i], p);
        c.residual += term;
        c.scale = std::max(c.scale, std::abs(term));
      }
    }
    c.pass = std::abs(c.residual) <= rel_tol * c.scale;
    r.pass = r.pass && c.pass;
    r.conditions.push_back(c);
  }
  return r;
}

/// Throws validation_error unless the form has compact support.
inline void require_compact(const EvolvableForm1D& form, double rel_tol = 1e-10) {
  const auto r = validate_moments(form, rel_tol);
  if (r.pass) return;
  for (const auto& c : r.conditions)
    if (!c.pass)
      throw validation_error("compact-support condition of order " + std::to_string(c.order) +
                             " fails: |residual| = " + std::to_string(std::abs(c.residual)) +
                             ", scale = " + std::to_string(c.scale));
}

// ---------------------------------------------------------------------------
// Moments

inline double norm_squared(const Spline1D& s) {
  double n2 = 0.0;
  for (std::size_t j = 0; j < s.segments().size(); ++j) {
    const auto& c = s.segments()[j];
    const auto p = poly::multiply(c, poly::conj(c));
    n2 += poly::integrate(p, 0.0, s.junctions()[j + 1] - s.junctions()[j]).real();
  }
  return n2;
}

struct SplineMoments {
  double norm2 = 0.0;
  double mean_x = 0.0;
};

/// ||phi||^2 and <x>. Throws degenerate_error for the zero spline.
inline SplineMoments moments(const Spline1D& s) {
  SplineMoments out;
  double first = 0.0;
  for (std::size_t j = 0; j < s.segments().size(); ++j) {
    const auto& c = s.segments()[j];
    const double aj = s.junctions()[j];
    const double d = s.junctions()[j + 1] - aj;
    const auto p = poly::multiply(c, poly::conj(c));
    const cplx base = poly::integrate(p, 0.0, d);
    out.norm2 += base.real();
    // x = u + a_j
    first += aj * base.real() + poly::integrate(poly::multiply(p, {0.0, 1.0}), 0.0, d).real();
  }
  if (!(out.norm2 > 0.0)) throw degenerate_error("zero-norm spline has no mean position");
  out.mean_x = first / out.norm2;
  return out;
}

// ---------------------------------------------------------------------------
// Radial profiles

/// Odd extension x psi(|x|) of a radial profile psi given on [0, R]. The
/// result is a 1D spline on [-R, R] whose free evolution divided by r is
/// the evolution of the spherically symmetric wave psi(r).
inline Spline1D odd_extension(const Spline1D& radial) {
  if (radial.left() != 0.0) throw construction_error("radial profile must start at r = 0");
  const auto& a = radial.junctions();
  const auto& seg = radial.segments();
  const std::size_t n = a.size();
  std::vector<double> ax;
  std::vector<poly::Coeffs> sx;
  for (std::size_t j = n - 1; j > 0; --j) ax.push_back(-a[j]);
  for (std::size_t j = 0; j < n; ++j) ax.push_back(a[j]);
  // Negative half: segment [-a_{j+1}, -a_j] with local u = x + a_{j+1}.
  // There x psi(|x|) = x psi(-x), and -x = a_{j+1} - u = a_j + (d - u).
  for (std::size_t j = n - 1; j-- > 0;) {
    const double d = a[j + 1] - a[j];
    // psi as a function of u: p(d - u) = reflect(shift(p, d))(u)
    const auto p_u = poly::reflect(poly::shift(seg[j], d));
    // x = u - a_{j+1}
    sx.push_back(poly::multiply(p_u, {-a[j + 1], 1.0}));
  }
  for (std::size_t j = 0; j + 1 < n; ++j) sx.push_back(poly::multiply(seg[j], {a[j], 1.0}));
  return Spline1D(std::move(ax), std::move(sx));
}

}  // namespace splinewave

#pragma once

// Time evolution of layered 1D forms: exact free evolution, the Fourier
// transform and the far-field asymptote built on it, the harmonic-oscillator
// map, and radial (3D spherically symmetric) profiles.

#include <array>
#include <cmath>

#include "splinewave/fresnel.hpp"
#include "splinewave/spline1d.hpp"

namespace splinewave {

/// Free evolution of the form at (x, t). Below the small-time cutoff for the
/// form's extent the initial function is returned.
inline cplx evolve_free(const EvolvableForm1D& form, double x, double t, const PhysicalUnits& units = {}) {
  if (!std::isfinite(x) || !std::isfinite(t)) throw domain_error("evolve: non-finite argument");
  if (t < 0.0) throw domain_error("evolve: negative time");
  const double t_eps = small_time_cutoff(units, form.extent() > 0.0 ? form.extent() : 1.0);
  if (t < t_eps) return form(x);
  const auto& a = form.junctions();
  const int top = form.top_degree();
  cplx v{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto chi = chi_family(top, x - a[i], t, units, t_eps);
    for (const auto& l : form.layers())
      if (l.weights[i] != 0.0) v += l.weights[i] * chi[l.degree];
  }
  return v;
}

// ---------------------------------------------------------------------------
// Oscillator

/// Maps an oscillator time tau and coordinate xi onto the free problem:
/// psi(xi, tau) = amplitude * exp(i * phase(xi)) * free(xi / c, t_free) per axis.
struct OscillatorMap {
  double cos_wt = 1.0;
  double tan_wt = 0.0;
  double free_time = 0.0;
  double phase_rate = 0.0;  // phase = -phase_rate * xi^2

  OscillatorMap(double tau, const PhysicalUnits& units) {
    if (!std::isfinite(tau)) throw domain_error("oscillator: non-finite time");
    if (tau < 0.0) throw domain_error("oscillator: negative time");
    const double w = units.omega();
    if (w == 0.0) {
      free_time = tau;
      return;
    }
    const double wt = w * tau;
    if (wt >= 0.5 * pi) throw caustic_error("oscillator: omega * tau reaches the first caustic at pi/2");
    cos_wt = std::cos(wt);
    tan_wt = std::tan(wt);
    free_time = tan_wt / w;
    phase_rate = 0.5 * tan_wt * units.m() * w / units.hbar();
  }

  double free_coordinate(double xi) const { return xi / cos_wt; }

  /// Prefactor for one axis.
  cplx axis_factor(double xi) const {
    const double theta = -phase_rate * xi * xi;
    return cplx{std::cos(theta), std::sin(theta)} / std::sqrt(cos_wt);
  }
};

/// Oscillator evolution in scaled coordinates xi at time tau. With
/// omega == 0 this is the free evolution.
inline cplx evolve_oscillator(const EvolvableForm1D& form, double xi, double tau, const PhysicalUnits& units) {
  const OscillatorMap map(tau, units);
  return map.axis_factor(xi) * evolve_free(form, map.free_coordinate(xi), map.free_time, units);
}

/// Free or oscillator evolution, picked from the units.
inline cplx evolve(const EvolvableForm1D& form, double x, double t, const PhysicalUnits& units = {}) {
  return units.is_oscillator() ? evolve_oscillator(form, x, t, units) : evolve_free(form, x, t, units);
}

// ---------------------------------------------------------------------------
// Radial

/// Distance below which a radial evaluation is clamped, relative to the
/// outer radius.
inline constexpr double kRadialClamp = 1e-7;

/// Evolution of a spherically symmetric wave psi(r) from the layered form of
/// its odd extension r psi(|r|). Radii in (0, r_eps) are clamped to r_eps.
inline cplx evolve_radial(const EvolvableForm1D& odd_form, double r, double t, const PhysicalUnits& units = {}) {
  if (!std::isfinite(r)) throw domain_error("radial: non-finite radius");
  if (r <= 0.0) throw domain_error("radial: radius must be positive");
  const double r_eps = kRadialClamp * 0.5 * odd_form.extent();
  const double rr = std::max(r, r_eps);
  return evolve(odd_form, rr, t, units) / rr;
}

// ---------------------------------------------------------------------------
// Fourier transform
//
// Convention: Phi(k) = (2 pi)^{-1/2} int exp(-i k x) phi(x) dx, so that
// f_n transforms to (2 pi)^{-1/2} (i k)^{-(n+1)}.

namespace detail {

/// sum_layers sum_i w_i exp(-i k a_i) / (i k)^(n+1) for a compactly supported
/// layered sum. Near k = 0 the individual terms are singular but their sum is
/// entire; there the exponentials are expanded about the centre of the
/// junctions and only the non-negative powers of k are kept (the negative
/// ones cancel by compact support).
inline cplx layer_transform(const std::vector<double>& a, const std::vector<Layer>& layers, double k) {
  if (a.empty() || layers.empty()) return {0.0, 0.0};
  const double c = 0.5 * (a.front() + a.back());
  const double half = 0.5 * (a.back() - a.front());
  cplx sum{0.0, 0.0};
  if (std::abs(k) * half <= 1.0) {
    constexpr int terms = 32;
    const cplx mik = -I * k;
    for (const auto& l : layers) {
      const int n = l.degree;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (l.weights[i] == 0.0) continue;
        const double b = a[i] - c;
        if (b == 0.0) continue;
        // q = 0 term: w (-1)^{n+1} b^{n+1} / (n+1)!
        cplx term = l.weights[i] * std::pow(-b, n + 1) / poly::factorial(n + 1);
        cplx part = term;
        for (int q = 1; q < terms; ++q) {
          term *= mik * b / static_cast<double>(q + n + 1);
          part += term;
        }
        sum += part;
      }
    }
  } else {
    const cplx ik = I * k;
    for (const auto& l : layers) {
      const cplx denom = std::pow(ik, l.degree + 1);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (l.weights[i] == 0.0) continue;
        const double ph = -k * (a[i] - c);
        sum += l.weights[i] * cplx{std::cos(ph), std::sin(ph)} / denom;
      }
    }
  }
  const double ph0 = -k * c;
  return sum * cplx{std::cos(ph0), std::sin(ph0)};
}

}  // namespace detail

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Closed-form Fourier transform of a compactly supported layered form.
inline cplx fourier_transform(const EvolvableForm1D& form, double k) {
  if (!std::isfinite(k)) throw domain_error("fourier: non-finite wavenumber");
  return kInvSqrt2Pi * detail::layer_transform(form.junctions(), form.layers(), k);
}

/// Far-field approximation of the free evolution. The transform is taken of
/// the function re-centred on its mean position.
class AsymptoticWave1D {
 public:
  AsymptoticWave1D(EvolvableForm1D form, double mean_x, PhysicalUnits units = {})
      : form_(std::move(form)), mean_(mean_x), units_(units) {}

  /// Transform of phi(x + <x>).
  cplx centred_transform(double k) const {
    const double ph = k * mean_;
    return cplx{std::cos(ph), std::sin(ph)} * fourier_transform(form_, k);
  }

  cplx operator()(double x, double t) const {
    if (!std::isfinite(x) || !std::isfinite(t)) throw domain_error("asymptote: non-finite argument");
    if (!(t > 0.0)) throw domain_error("asymptote: time must be positive");
    const double X = x - mean_;
    const double mh = units_.m() / (units_.hbar() * t);
    // sqrt(m / (i hbar t)) exp(i m X^2 / (2 hbar t))
    const cplx amp = std::sqrt(mh) * std::conj(sqrt_i);
    const cplx phase = detail::unit_phase(X * std::sqrt(mh / pi));
    return amp * phase * centred_transform(mh * X);
  }

  double mean_x() const { return mean_; }
  const EvolvableForm1D& form() const { return form_; }

 private:
  EvolvableForm1D form_;
  double mean_;
  PhysicalUnits units_;
};

inline AsymptoticWave1D asymptotic_wave(const Spline1D& s, const PhysicalUnits& units = {}) {
  return AsymptoticWave1D(evolvable_form(s), moments(s).mean_x, units);
}

}  // namespace splinewave

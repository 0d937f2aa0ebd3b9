#pragma once

// Dense polynomial helpers. A polynomial is a coefficient vector c with
// p(u) = sum_k c[k] u^k.

#include <vector>

#include "splinewave/core.hpp"

namespace splinewave::poly {

using Coeffs = std::vector<cplx>;

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= static_cast<double>(i);
  return r;
}

inline cplx eval(const Coeffs& c, double u) {
  cplx v{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
  return v;
}

/// k-th derivative evaluated at u.
inline cplx derivative(const Coeffs& c, int k, double u) {
  cplx v{0.0, 0.0};
  for (int p = static_cast<int>(c.size()) - 1; p >= k; --p) {
    // falling factorial p (p-1) ... (p-k+1)
    double ff = 1.0;
    for (int q = 0; q < k; ++q) ff *= static_cast<double>(p - q);
    v = v * u + c[p] * ff;
  }
  return v;
}

/// q(u) = p(u + s).
inline Coeffs shift(const Coeffs& c, double s) {
  Coeffs out(c.size(), cplx{0.0, 0.0});
  const int n = static_cast<int>(c.size());
  for (int p = 0; p < n; ++p) {
    double sp = 1.0;  // s^(p-k) built from k = p downwards
    for (int k = p; k >= 0; --k) {
      out[k] += c[p] * binomial(p, k) * sp;
      sp *= s;
    }
  }
  return out;
}

/// q(u) = p(-u).
inline Coeffs reflect(Coeffs c) {
  for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
  return c;
}

inline Coeffs multiply(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Coeffs conj(Coeffs c) {
  for (auto& v : c) v = std::conj(v);
  return c;
}

/// int_lo^hi p(u) du
inline cplx integrate(const Coeffs& c, double lo, double hi) {
  cplx v{0.0, 0.0};
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double e = static_cast<double>(k + 1);
    v += c[k] * ((std::pow(hi, e) - std::pow(lo, e)) / e);
  }
  return v;
}

}  // namespace splinewave::poly

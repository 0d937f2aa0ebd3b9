#pragma once

// Gauss-Legendre rules on [-1, 1], expanded from Boost's symmetric tables.

#include <boost/math/quadrature/gauss.hpp>

#include <string>
#include <vector>

#include "splinewave/core.hpp"

namespace splinewave {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

template <unsigned N>
GaussRule expand_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  GaussRule r;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0.0) {
      r.nodes.push_back(0.0);
      r.weights.push_back(w[k]);
      continue;
    }
    r.nodes.push_back(-x[k]);
    r.weights.push_back(w[k]);
    r.nodes.push_back(x[k]);
    r.weights.push_back(w[k]);
  }
  return r;
}

}  // namespace detail

inline bool gauss_rule_supported(int n) { return n == 7 || n == 10 || n == 15 || n == 20 || n == 25 || n == 30; }

inline const GaussRule& gauss_rule(int n) {
  static const GaussRule r7 = detail::expand_rule<7>();
  static const GaussRule r10 = detail::expand_rule<10>();
  static const GaussRule r15 = detail::expand_rule<15>();
  static const GaussRule r20 = detail::expand_rule<20>();
  static const GaussRule r25 = detail::expand_rule<25>();
  static const GaussRule r30 = detail::expand_rule<30>();
  switch (n) {
    case 7: return r7;
    case 10: return r10;
    case 15: return r15;
    case 20: return r20;
    case 25: return r25;
    case 30: return r30;
    default: throw capability_error("no Gauss-Legendre rule with " + std::to_string(n) + " nodes (use 7, 10, 15, 20, 25 or 30)");
  }
}

}  // namespace splinewave

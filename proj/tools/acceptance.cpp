// Acceptance run: one PASS/FAIL line per criterion. `--only N` restricts the
// run to one criterion; the exit status is 1 if any selected criterion fails.

#include <fmt/core.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "splinewave/evolve1d.hpp"
#include "splinewave/fixtures.hpp"
#include "splinewave/oracle.hpp"
#include "splinewave/spline2d.hpp"
#include "splinewave/spline3d.hpp"

namespace sw = splinewave;
using sw::cplx;

namespace {

// Tolerances, one per check.
constexpr double kClosedVsQuadrature = 1e-8;
constexpr double kTinyTime = 1e-13;
constexpr double kLimitRecovery = 1e-6;
constexpr double kUnitarity = 1e-6;
constexpr double kOrderTarget = 2.0;
constexpr double kOrderSlack = 0.2;
constexpr double kGapAtOne = 0.03;
constexpr double kGapAtFour = 0.01;
constexpr double kFourierOracle = 1e-10;
constexpr double kStencil = 1e-12;
constexpr double kCellPolynomial = 1e-10;
constexpr double kCornerIndentEvolution = 1e-6;
constexpr double kOscillatorPairwise = 1e-7;
constexpr double kWeakTrap = 1e-5;
constexpr double kRadial = 1e-8;

const std::vector<double> kTimes{0.1, 0.2, 0.5, 1.0};

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<std::pair<std::string, sw::Spline1D>> lines() {
  std::vector<std::pair<std::string, sw::Spline1D>> out;
  for (const char* n : {"square", "triangle", "trapezium", "smooth-hump", "truncated-quadratic"})
    out.emplace_back(n, sw::fixtures::line_fixture(n));
  return out;
}

// Largest deviation with the name of where it happened.
struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& w) {
    if (!(v <= value)) {  // NaN counts as worst
      value = v;
      where = w;
    }
  }
};

Outcome closed_vs_quadrature() {
  Worst w;
  for (const auto& [name, s] : lines()) {
    const auto f = sw::evolvable_form(s);
    const double a = 0.5 * s.extent(), c = 0.5 * (s.left() + s.right());
    for (double t : kTimes) {
      const double half = 5.0 * a * (1.0 + t);
      for (int k = 0; k < 200; ++k) {
        const double x = c - half + 2.0 * half * k / 199.0;
        const auto q = sw::oracle::quadrature_evolve_free(s, x, t);
        w.update(std::abs(sw::evolve_free(f, x, t) - q.value), fmt::format("{} t={}", name, t));
      }
    }
  }
  return {w.value < kClosedVsQuadrature, fmt::format("max |dpsi| {:.3g} ({}), limit {:g}", w.value, w.where,
                                                     kClosedVsQuadrature)};
}

Outcome limit_recovery() {
  Worst w;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& [name, s] : lines()) {
    const auto f = sw::evolvable_form(s);
    for (int k = 1; k < 200; ++k) {
      const double x = s.left() + s.extent() * k / 200.0;
      w.update(std::abs(sw::evolve_free(f, x, kTinyTime) - s(x)), name);
    }
  }
  for (const auto& [name, p] : {std::pair{"cubic-radial", sw::fixtures::cubic_radial()},
                                std::pair{"cone-radial", sw::fixtures::cone_radial()}}) {
    const auto f = sw::evolvable_form(sw::odd_extension(p));
    for (int k = 1; k < 200; ++k) {
      const double r = p.right() * k / 200.0;
      w.update(std::abs(sw::evolve_radial(f, r, kTinyTime) - p(r)), name);
    }
  }
  auto sweep2d = [&](const std::string& name, const sw::EvolvableForm2D& f, double x0, double x1, double y0, double y1,
                     const std::function<cplx(double, double)>& phi) {
    for (int k = 0; k < 400; ++k) {
      const double x = x0 + (x1 - x0) * unit(rng), y = y0 + (y1 - y0) * unit(rng);
      w.update(std::abs(sw::evolve_free(f, x, y, kTinyTime) - phi(x, y)), name);
    }
  };
  const auto disk = sw::fixtures::disk_bilinear();
  sweep2d("disk-bilinear", sw::bilinear_form(disk), -1, 1, -1, 1, [&](double x, double y) { return disk.bilinear(x, y); });
  const auto app = sw::biquadratic_extract(sw::fixtures::corner_indent());
  sweep2d("corner-indent", app.form, -1, 2, -1, 2, [&](double x, double y) { return app.spline(x, y); });
  const auto prod = sw::biquadratic_extract(sw::fixtures::product_2d());
  sweep2d("product-2d", prod.form, -2, 2, -1, 1, [&](double x, double y) { return prod.spline(x, y); });
  const auto axis = sw::detail::uniform_axis(-1.0, 0.5, 5);
  sw::CArray3 v(5, 5, 5);
  for (std::size_t i = 1; i < 4; ++i)
    for (std::size_t j = 1; j < 4; ++j)
      for (std::size_t k = 1; k < 4; ++k) v(i, j, k) = 1.0 / double(1 + (i - 2) * (i - 2) + (j - 2) * (j - 2) + (k - 2) * (k - 2));
  const sw::GridSpline3D g(axis, axis, axis, v);
  const sw::TrilinearForm tri(g);
  for (int k = 0; k < 400; ++k) {
    const double x = -1 + 2 * unit(rng), y = -1 + 2 * unit(rng), z = -1 + 2 * unit(rng);
    w.update(std::abs(tri.evolve(x, y, z, kTinyTime) - g.trilinear(x, y, z)), "pyramid-3d");
  }
  return {w.value < kLimitRecovery,
          fmt::format("max |psi(t={:g}) - phi| {:.3g} ({}), limit {:g}", kTinyTime, w.value, w.where, kLimitRecovery)};
}

Outcome unitarity() {
  Worst w;
  for (const auto& [name, s] : lines()) {
    const auto f = sw::evolvable_form(s);
    const double n0 = sw::moments(s).norm2;
    for (double t : kTimes)
      w.update(std::abs(sw::oracle::evolved_norm_1d(f, t) / n0 - 1.0), fmt::format("{} t={}", name, t));
  }
  const auto disk = sw::bilinear_form(sw::fixtures::disk_bilinear());
  const double n0 = sw::moments(disk).norm2;
  for (double t : kTimes)
    w.update(std::abs(sw::oracle::evolved_norm_2d(disk, t) / n0 - 1.0), fmt::format("disk-bilinear t={}", t));
  return {w.value < kUnitarity, fmt::format("max relative norm drift {:.3g} ({}), limit {:g}", w.value, w.where, kUnitarity)};
}

Outcome residual_orders() {
  const std::vector<double> steps{0.04, 0.02, 0.01};
  double lo = 1e300, hi = -1e300;
  Worst off;
  auto note = [&](const std::string& name, const sw::oracle::ResidualReport& r) {
    for (double o : r.orders) {
      off.update(std::abs(o - kOrderTarget), name);
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
  };
  const sw::PhysicalUnits trap(1.0, 1.0, 1.0);
  for (const auto& [name, s] : lines()) {
    const auto f = sw::evolvable_form(s);
    note(name + " free",
         sw::oracle::schrodinger_residual([&](double x, double t) { return sw::evolve_free(f, x, t); }, {}, steps));
    note(name + " oscillator",
         sw::oracle::schrodinger_residual([&](double x, double t) { return sw::evolve_oscillator(f, x, t, trap); }, {},
                                          steps, trap));
  }
  const auto disk = sw::bilinear_form(sw::fixtures::disk_bilinear());
  sw::oracle::ResidualRegion region;
  region.samples = 9;
  note("disk-bilinear free", sw::oracle::schrodinger_residual_2d(
                                 [&](double x, double y, double t) { return sw::evolve_free(disk, x, y, t); }, region, steps));
  return {off.value <= kOrderSlack, fmt::format("orders in [{:.3f}, {:.3f}] (furthest: {}), expected {:g} +- {:g}", lo, hi, off.where,
                            kOrderTarget, kOrderSlack)};
}

Outcome asymptotic_claim() {
  bool monotone = true;
  std::string trend;
  double square_at_one = 0.0, square_at_four = 0.0;
  for (const auto& [name, s] : lines()) {
    double prev = 1e300;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      const double g = sw::oracle::asymptotic_gap(s, t).complex_gap;
      if (!(g < prev)) {
        monotone = false;
        trend += fmt::format(" {} rises at t={}", name, t);
      }
      prev = g;
      if (name == "square" && t == 1.0) square_at_one = g;
      if (name == "square" && t == 4.0) square_at_four = g;
    }
  }
  const bool pass = monotone && square_at_one < kGapAtOne && square_at_four < kGapAtFour;
  return {pass, fmt::format("square gap {:.4f} at t=1 (limit {:g}), {:.4f} at t=4 (limit {:g}); monotone: {}{}",
                            square_at_one, kGapAtOne, square_at_four, kGapAtFour, monotone ? "yes" : "no", trend)};
}

Outcome fourier() {
  Worst oracle_dev, formula_dev;
  for (const auto& [name, s] : lines()) {
    const auto f = sw::evolvable_form(s);
    const double a = 0.5 * s.extent();
    for (int q = 0; q < 400; ++q) {
      const double k = (-20.0 + 40.0 * q / 399.0) / a;
      oracle_dev.update(std::abs(sw::fourier_transform(f, k) - sw::oracle::numerical_fourier(s, k)), name);
    }
  }
  // Closed forms for unit length scale; all four are real and even in k.
  const double r2 = std::sqrt(2 / sw::pi), r8 = std::sqrt(8 / sw::pi);
  const std::vector<std::pair<std::string, std::function<double(double)>>> closed{
      {"square", [&](double k) { return r2 * std::sin(k) / k; }},
      {"triangle", [&](double k) { return r2 * (1 - std::cos(k)) / (k * k); }},
      {"smooth-hump", [&](double k) { return r8 * std::sin(k) * (1 - std::cos(k)) / (k * k * k); }},
      {"truncated-quadratic", [&](double k) { return r8 * (std::sin(k) - k * std::cos(k)) / (k * k * k); }},
  };
  for (const auto& [name, phi] : closed) {
    const auto f = sw::evolvable_form(sw::fixtures::line_fixture(name));
    for (int q = 0; q < 400; ++q) {
      const double k = -20.0 + 40.0 * (q + 0.5) / 400.0;  // avoids k = 0 where the closed forms are 0/0
      formula_dev.update(std::abs(sw::fourier_transform(f, k) - phi(k)), name);
    }
  }
  const bool pass = oracle_dev.value < kFourierOracle && formula_dev.value < kFourierOracle;
  return {pass, fmt::format("vs segment oracle {:.3g} ({}), vs closed forms {:.3g} ({}), limit {:g}", oracle_dev.value,
                            oracle_dev.where, formula_dev.value, formula_dev.where, kFourierOracle)};
}

Outcome stencils() {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Worst w;
  for (std::size_t nx = 1; nx <= 6; ++nx)
    for (std::size_t ny = 1; ny <= 6; ++ny) {
      sw::CMatrix v(nx, ny);
      for (auto& z : v.data()) z = {dist(rng), dist(rng)};
      const auto h = sw::bilinear_h(v, 0.6, 0.6);
      const auto ref = sw::oracle::stencil_solver(v, 0.6, 0.6);
      for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
          w.update(std::abs(h(i, j) - ref(i, j)), fmt::format("bilinear {}x{}", nx, ny));
    }
  for (std::size_t n = 1; n <= 4; ++n)
    for (int rep = 0; rep < 3; ++rep) {
      sw::CArray3 v(n, n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) v(i, j, k) = {dist(rng), dist(rng)};
      const auto h = sw::trilinear_h(v, 0.6);
      const auto ref = sw::oracle::stencil_solver(v, 0.6, 0.6, 0.6);
      for (std::size_t i = 0; i < h.nx(); ++i)
        for (std::size_t j = 0; j < h.ny(); ++j)
          for (std::size_t k = 0; k < h.nz(); ++k)
            w.update(std::abs(h(i, j, k) - ref(i, j, k)), fmt::format("trilinear {}^3", n));
    }
  return {w.value <= kStencil, fmt::format("max |stencil - solve| {:.3g} ({}), limit {:g}", w.value, w.where, kStencil)};
}

Outcome corner_indent() {
  const auto r = sw::biquadratic_extract(sw::fixtures::corner_indent());
  std::vector<std::string> bad;
  // junction (2, 2) of the frame is index (3, 3) here
  if (!(std::abs(r.k()(3, 3) + 4.0) <= kCellPolynomial)) bad.push_back("corner weight");
  const double edge[4] = {8, -26, 32, -14};
  for (std::size_t i = 0; i < 4; ++i)
    if (!(std::abs(r.cx()(3, i) - edge[i]) <= kCellPolynomial && std::abs(r.cy()(i, 3) - edge[i]) <= kCellPolynomial))
      bad.push_back(fmt::format("edge weight {}", i));
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double cell_dev = 0.0;
  std::vector<sw::oracle::Cell2D> cells;
  for (const auto& c : sw::fixtures::corner_indent_cells()) {
    const double x0 = r.spline.x[c.i], y0 = r.spline.y[c.j];
    cells.push_back({x0, x0 + 1, y0, y0 + 1, [f = c.f](double x, double y) { return cplx{f(x, y), 0.0}; }});
    if (c.name[0] == 'L') continue;  // mirror images of R1..R3
    for (int k = 0; k < 100; ++k) {
      const double x = x0 + unit(rng), y = y0 + unit(rng);
      cell_dev = std::max(cell_dev, std::abs(r.form(x, y) - c.f(x, y)));
    }
  }
  if (!(cell_dev <= kCellPolynomial)) bad.push_back("cell polynomials");
  double evo_dev = 0.0;
  for (double x : {-0.6, 0.5, 1.5})
    for (double y : {-0.4, 0.5, 1.2}) {
      const auto q = sw::oracle::quadrature_evolve_cells(cells, x, y, 0.1);
      evo_dev = std::max(evo_dev, std::abs(sw::evolve_free(r.form, x, y, 0.1) - q.value));
    }
  if (!(evo_dev <= kCornerIndentEvolution)) bad.push_back("evolution");
  std::string failed;
  for (const auto& b : bad) failed += " " + b;
  return {bad.empty(), fmt::format("corner {:g}, edge row [{:g} {:g} {:g} {:g}], cells {:.3g} (limit {:g}), "
                                   "t=0.1 vs quadrature {:.3g} (limit {:g}){}{}",
                                   r.k()(3, 3).real(), r.cx()(3, 0).real(), r.cx()(3, 1).real(), r.cx()(3, 2).real(),
                                   r.cx()(3, 3).real(), cell_dev, kCellPolynomial, evo_dev, kCornerIndentEvolution,
                                   bad.empty() ? "" : "; failed:", failed)};
}

Outcome oscillator() {
  const auto s = sw::fixtures::square();
  const auto f = sw::evolvable_form(s);
  const sw::PhysicalUnits u(1.0, 1.0, 1.0);
  Worst pair;
  for (double wt : {0.3, 0.6, 1.2})
    for (int k = 0; k < 41; ++k) {
      const double x = -4.0 + 8.0 * k / 40.0;
      const cplx closed = sw::oracle::square_in_oscillator(1.0, x, wt, u);
      const cplx mapped = sw::evolve_oscillator(f, x, wt, u);
      const cplx quad = sw::oracle::quadrature_evolve_oscillator(s, x, wt, u).value;
      const double d = std::max({std::abs(closed - mapped), std::abs(closed - quad), std::abs(mapped - quad)});
      pair.update(d, fmt::format("wt={}", wt));
    }
  Worst weak;
  const sw::PhysicalUnits trap(1.0, 1.0, 1e-6);
  for (const auto& [name, l] : lines()) {
    const auto g = sw::evolvable_form(l);
    for (int k = 0; k < 41; ++k) {
      const double x = -4.0 + 8.0 * k / 40.0;
      weak.update(std::abs(sw::evolve_oscillator(g, x, 0.3, trap) - sw::evolve_free(g, x, 0.3)), name);
    }
  }
  const bool pass = pair.value < kOscillatorPairwise && weak.value < kWeakTrap;
  return {pass, fmt::format("pairwise {:.3g} ({}, limit {:g}), weak trap {:.3g} ({}, limit {:g})", pair.value, pair.where,
                            kOscillatorPairwise, weak.value, weak.where, kWeakTrap)};
}

Outcome radial() {
  Worst w;
  for (const auto& [name, p] : {std::pair{"cubic-radial", sw::fixtures::cubic_radial()},
                                std::pair{"cone-radial", sw::fixtures::cone_radial()}}) {
    const auto odd = sw::odd_extension(p);
    const auto f = sw::evolvable_form(odd);
    for (double t : {0.05, 0.1, 0.2, 0.5, 1.0})
      for (double r : {0.01, 0.1, 0.3, 0.5, 0.8, 1.0, 1.3, 2.0, 3.0, 5.0}) {
        const cplx q = sw::oracle::quadrature_evolve_free(odd, r, t).value / r;
        w.update(std::abs(sw::evolve_radial(f, r, t) - q), fmt::format("{} r={} t={}", name, r, t));
      }
  }
  return {w.value < kRadial, fmt::format("max |dpsi| {:.3g} ({}), limit {:g}", w.value, w.where, kRadial)};
}

struct Criterion {
  std::string title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the spline wave library"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {"closed form vs propagator quadrature", closed_vs_quadrature},
      {"recovery of the initial function as t -> 0", limit_recovery},
      {"norm conservation", unitarity},
      {"Schroedinger residual convergence order", residual_orders},
      {"far-field form approaches the exact wave", asymptotic_claim},
      {"Fourier transforms", fourier},
      {"bilinear and trilinear stencils vs dense solve", stencils},
      {"corner-indent biquadratic example", corner_indent},
      {"harmonic oscillator", oscillator},
      {"radial evolution vs odd-extension quadrature", radial},
  };
  bool ok = true;
  for (std::size_t n = 1; n <= all.size(); ++n) {
    if (only != 0 && static_cast<std::size_t>(only) != n) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[n - 1].run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("{} {:>2} {}: {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", n, all[n - 1].title, o.detail, secs);
    std::fflush(stdout);
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}

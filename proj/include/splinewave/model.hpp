#pragma once

// Realises a SplineDocument as something that can be evaluated and evolved,
// and runs the checks behind the command-line tool: validation, sampling,
// far-field comparison and oracle comparison.

#include <array>
#include <cstdio>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "splinewave/document.hpp"
#include "splinewave/evolve1d.hpp"
#include "splinewave/fixtures.hpp"
#include "splinewave/oracle.hpp"
#include "splinewave/parallel.hpp"
#include "splinewave/spline1d.hpp"
#include "splinewave/spline2d.hpp"
#include "splinewave/spline3d.hpp"

namespace splinewave {

namespace model {

struct Line {
  std::optional<Spline1D> spline;  // absent when given as layers that fail the moment conditions
  EvolvableForm1D form;
};

/// psi(r) with its odd extension r psi(|r|) carrying the evolution.
struct Radial {
  Spline1D profile;
  Spline1D odd;
  EvolvableForm1D form;
};

struct Bilinear {
  GridSpline2D grid;
  EvolvableForm2D form;
};

struct Biquadratic {
  BiquadraticResult result;
};

struct Trilinear {
  GridSpline3D grid;
  TrilinearForm form;
};

using Kind = std::variant<Line, Radial, Bilinear, Biquadratic, Trilinear>;

}  // namespace model

using Point = std::array<double, 3>;

class Model {
 public:
  explicit Model(const SplineDocument& d) : units_(d.units), kind_(realise(d.definition)) {}

  const model::Kind& kind() const { return kind_; }
  const PhysicalUnits& units() const { return units_; }

  int dimension() const {
    return std::visit(
        [](const auto& m) -> int {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, model::Line>) return 1;
          if constexpr (std::is_same_v<T, model::Bilinear> || std::is_same_v<T, model::Biquadratic>) return 2;
          return 3;
        },
        kind_);
  }
  bool radial() const { return std::holds_alternative<model::Radial>(kind_); }

  /// Coordinates a sample needs: 1 for lines and radial profiles.
  int sample_axes() const { return radial() ? 1 : dimension(); }

  /// Half the largest extent of the support; the natural length unit.
  double length_scale() const {
    return std::visit(
        [](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, model::Line>)
            return 0.5 * m.form.extent();
          else if constexpr (std::is_same_v<T, model::Radial>)
            return m.profile.right();
          else if constexpr (std::is_same_v<T, model::Bilinear>)
            return 0.5 * std::max(m.grid.x.back() - m.grid.x.front(), m.grid.y.back() - m.grid.y.front());
          else if constexpr (std::is_same_v<T, model::Biquadratic>)
            return 0.5 * m.result.form.extent();
          else
            return 0.5 * m.form.extent();
        },
        kind_);
  }

  /// m a^2 / hbar for the length scale above.
  double time_unit() const { return units_.time_scale(length_scale()); }

  /// psi at time t; t = 0 returns the initial function itself. Radial models
  /// take r = |p[0]|, with r = 0 read at the clamp radius.
  cplx operator()(const Point& p, double t) const {
    if (!std::isfinite(t) || t < 0.0) throw domain_error("time must be finite and non-negative");
    return std::visit(
        [&](const auto& m) -> cplx {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, model::Line>) {
            if (t == 0.0) return m.spline ? (*m.spline)(p[0]) : m.form(p[0]);
            return evolve(m.form, p[0], t, units_);
          } else if constexpr (std::is_same_v<T, model::Radial>) {
            const double r = std::abs(p[0]);
            if (t == 0.0) {
              // r = 0 is interior to the 3D function; take the limit from r > 0
              if (r == 0.0) return m.profile.right_limit(0, 0);
              return m.profile(r);
            }
            return evolve_radial(m.form, std::max(r, kRadialClamp * m.profile.right()), t, units_);
          } else if constexpr (std::is_same_v<T, model::Bilinear>) {
            if (t == 0.0) return m.grid.bilinear(p[0], p[1]);
            return evolve(m.form, p[0], p[1], t, units_);
          } else if constexpr (std::is_same_v<T, model::Biquadratic>) {
            if (t == 0.0) return m.result.spline(p[0], p[1]);
            return evolve(m.result.form, p[0], p[1], t, units_);
          } else {
            if (t == 0.0) return m.grid.trilinear(p[0], p[1], p[2]);
            return evolve(m.form, p[0], p[1], p[2], t, units_);
          }
        },
        kind_);
  }

 private:
  static model::Line line(Spline1D s) {
    auto form = evolvable_form(s);
    return {std::move(s), std::move(form)};
  }

  static model::Radial radial(Spline1D profile) {
    auto odd = odd_extension(profile);
    auto form = evolvable_form(odd);
    return {std::move(profile), std::move(odd), std::move(form)};
  }

  static model::Bilinear bilinear(GridSpline2D g) {
    auto form = bilinear_form(g);
    return {std::move(g), std::move(form)};
  }

  static model::Kind realise(const doc::Definition& def) {
    return std::visit(
        [](const auto& v) -> model::Kind {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, doc::JunctionValues>) {
            return line(build_spline(v.junctions, v.values, v.degree, v.seeds));
          } else if constexpr (std::is_same_v<T, doc::Segments>) {
            return line(Spline1D(v.junctions, v.coefficients));
          } else if constexpr (std::is_same_v<T, doc::Layers>) {
            model::Line l{std::nullopt, EvolvableForm1D(v.junctions, v.layers)};
            if (validate_moments(l.form).pass && l.form.junctions().size() >= 2) l.spline = to_spline(l.form);
            return l;
          } else if constexpr (std::is_same_v<T, doc::Fixture>) {
            if (v.name == "cubic-radial") return radial(fixtures::cubic_radial(v.a));
            if (v.name == "cone-radial") return radial(fixtures::cone_radial(v.a));
            if (v.name == "disk-bilinear") return bilinear(fixtures::disk_bilinear(v.a));
            if (v.name == "corner-indent") return model::Biquadratic{biquadratic_extract(fixtures::corner_indent())};
            if (v.name == "product-2d") return model::Biquadratic{biquadratic_extract(fixtures::product_2d(v.a))};
            return line(fixtures::line_fixture(v.name, v.a, v.b));
          } else if constexpr (std::is_same_v<T, doc::Grid2D>) {
            if (v.kind == doc::Grid2D::Kind::bilinear) return bilinear(GridSpline2D(v.x, v.y, v.values));
            BiquadraticInput in;
            in.x = v.x;
            in.y = v.y;
            in.values = v.values;
            in.phi_x = v.phi_x;
            in.phi_y = v.phi_y;
            if (v.occupied) in.occupied = *v.occupied;
            in.seed_i = v.seed_i;
            in.seed_j = v.seed_j;
            in.seed_xy = v.seed_xy;
            return model::Biquadratic{biquadratic_extract(in)};
          } else if constexpr (std::is_same_v<T, doc::Grid3D>) {
            GridSpline3D g(v.x, v.y, v.z, v.values);
            TrilinearForm f(g);
            return model::Trilinear{std::move(g), std::move(f)};
          } else {
            return radial(Spline1D(v.profile.junctions, v.profile.coefficients));
          }
        },
        def);
  }

  PhysicalUnits units_;
  model::Kind kind_;
};

// ---------------------------------------------------------------------------
// Validation

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

/// Weights of one layer. Rows run over x junctions; a 1D layer is one row.
struct WeightTable {
  std::string label;
  std::vector<double> row_at;  // x junction of each row (empty for 1D)
  std::vector<std::vector<cplx>> rows;
};

struct ValidationReport {
  std::vector<Check> checks;
  std::vector<WeightTable> weights;
  std::string purity;  // 1D only

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

namespace detail {

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline Check moment_check(const std::string& name, const MomentReport& r) {
  Check c{name, r.pass, {}};
  double worst = 0.0;
  for (const auto& cond : r.conditions) {
    const double rel = cond.scale > 0.0 ? std::abs(cond.residual) / cond.scale : std::abs(cond.residual);
    worst = std::max(worst, rel);
    if (!cond.pass)
      c.detail += std::string(c.detail.empty() ? "" : "; ") + "order " + std::to_string(cond.order) + " residual " +
                  short_number(std::abs(cond.residual)) + " (scale " + short_number(cond.scale) + ")";
  }
  if (c.pass) c.detail = "max relative residual " + short_number(worst);
  return c;
}

/// Moment conditions of every 1D slice of a tensor form: for fixed y layer
/// and junction the x-sum must be compact, and likewise with x and y swapped.
/// Together these are equivalent to compact support of the tensor form.
inline MomentReport slice_moments(const EvolvableForm2D& form) {
  MomentReport total;
  auto merge = [&](const MomentReport& r) {
    for (const auto& c : r.conditions) total.conditions.push_back(c);
    total.pass = total.pass && r.pass;
  };
  for (int q = 0; q <= form.max_py(); ++q)
    for (std::size_t j = 0; j < form.ay().size(); ++j) {
      std::vector<Layer> ls;
      for (const auto& l : form.layers()) {
        if (l.py != q) continue;
        Layer x{l.px, std::vector<cplx>(form.ax().size())};
        for (std::size_t i = 0; i < form.ax().size(); ++i) x.weights[i] = l.weights(i, j);
        ls.push_back(std::move(x));
      }
      if (!ls.empty()) merge(validate_moments(EvolvableForm1D(form.ax(), std::move(ls))));
    }
  for (int p = 0; p <= form.max_px(); ++p)
    for (std::size_t i = 0; i < form.ax().size(); ++i) {
      std::vector<Layer> ls;
      for (const auto& l : form.layers()) {
        if (l.px != p) continue;
        Layer y{l.py, std::vector<cplx>(form.ay().size())};
        for (std::size_t j = 0; j < form.ay().size(); ++j) y.weights[j] = l.weights(i, j);
        ls.push_back(std::move(y));
      }
      if (!ls.empty()) merge(validate_moments(EvolvableForm1D(form.ay(), std::move(ls))));
    }
  return total;
}

inline MomentReport slice_moments(const TrilinearForm& form) {
  MomentReport total;
  const auto& h = form.h();
  auto run = [&](const std::vector<double>& axis, auto&& weight, std::size_t n1, std::size_t n2) {
    for (std::size_t u = 0; u < n1; ++u)
      for (std::size_t v = 0; v < n2; ++v) {
        Layer l{1, std::vector<cplx>(axis.size())};
        for (std::size_t i = 0; i < axis.size(); ++i) l.weights[i] = weight(i, u, v);
        const auto r = validate_moments(EvolvableForm1D(axis, {std::move(l)}));
        for (const auto& c : r.conditions) total.conditions.push_back(c);
        total.pass = total.pass && r.pass;
      }
  };
  run(form.ax(), [&](std::size_t i, std::size_t u, std::size_t v) { return h(i, u, v); }, h.ny(), h.nz());
  run(form.ay(), [&](std::size_t j, std::size_t u, std::size_t v) { return h(u, j, v); }, h.nx(), h.nz());
  run(form.az(), [&](std::size_t k, std::size_t u, std::size_t v) { return h(u, v, k); }, h.nx(), h.ny());
  return total;
}

inline WeightTable table_1d(const Layer& l) {
  return {"f" + std::to_string(l.degree) + " weights", {}, {l.weights}};
}

inline WeightTable table_2d(const std::string& label, const std::vector<double>& ax, const CMatrix& w) {
  WeightTable t{label, ax, {}};
  for (std::size_t i = 0; i < w.rows(); ++i) {
    std::vector<cplx> row(w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) row[j] = w(i, j);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline bool all_zero(const CMatrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](cplx z) { return z == 0.0; });
}

inline void line_report(ValidationReport& r, const std::optional<Spline1D>& s, const EvolvableForm1D& form) {
  r.checks.push_back(detail::moment_check("compact support", validate_moments(form)));
  for (const auto& l : form.layers()) r.weights.push_back(detail::table_1d(l));
  if (s) r.purity = std::string(to_string(classify(*s)));
}

}  // namespace detail

inline ValidationReport validate(const Model& model) {
  ValidationReport r;
  r.checks.push_back({"construction", true, "ok"});
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, model::Line>) {
          detail::line_report(r, m.spline, m.form);
        } else if constexpr (std::is_same_v<T, model::Radial>) {
          detail::line_report(r, m.odd, m.form);
        } else if constexpr (std::is_same_v<T, model::Bilinear>) {
          r.checks.push_back(detail::moment_check("compact support", detail::slice_moments(m.form)));
          for (const auto& l : m.form.layers())
            r.weights.push_back(detail::table_2d("f1(x) f1(y) weights", m.form.ax(), l.weights));
        } else if constexpr (std::is_same_v<T, model::Biquadratic>) {
          r.checks.push_back(detail::moment_check("compact support", detail::slice_moments(m.result.form)));
          for (const auto& l : m.result.form.layers()) {
            if (detail::all_zero(l.weights)) continue;
            r.weights.push_back(detail::table_2d(
                "f" + std::to_string(l.px) + "(x) f" + std::to_string(l.py) + "(y) weights", m.result.form.ax(),
                l.weights));
          }
        } else {
          r.checks.push_back(detail::moment_check("compact support", detail::slice_moments(m.form)));
        }
      },
      model.kind());
  return r;
}

// ---------------------------------------------------------------------------
// Sampling

/// lo:hi:n, n >= 1 points including both ends.
struct AxisRange {
  double lo = 0.0, hi = 0.0;
  std::size_t n = 1;

  double at(std::size_t k) const { return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (n - 1); }
};

struct SampleGrid {
  std::vector<double> times;
  std::vector<AxisRange> axes;  // one per sample axis
};

struct SampleRow {
  double t;
  Point p;
  cplx value;
};

/// Rows ordered by time, then x, then y, then z.
inline std::vector<SampleRow> sample(const Model& model, const SampleGrid& g) {
  const int dim = model.sample_axes();
  if (static_cast<int>(g.axes.size()) != dim)
    throw domain_error("need " + std::to_string(dim) + " coordinate ranges, got " + std::to_string(g.axes.size()));
  std::size_t per_time = 1;
  for (const auto& a : g.axes) per_time *= a.n;
  std::vector<SampleRow> rows(per_time * g.times.size());
  parallel_for(rows.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const double t = g.times[k / per_time];
      std::size_t rest = k % per_time;
      Point p{0.0, 0.0, 0.0};
      for (int d = dim - 1; d >= 0; --d) {
        const auto& a = g.axes[static_cast<std::size_t>(d)];
        p[static_cast<std::size_t>(d)] = a.at(rest % a.n);
        rest /= a.n;
      }
      rows[k] = {t, p, model(p, t)};
    }
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Far field

/// Far-field approximation at time t; free 1D and 2D models only.
class FarField {
 public:
  explicit FarField(const Model& model) : model_(model) {
    if (model.units().is_oscillator()) throw capability_error("far-field form is implemented for free dynamics only");
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, model::Line>) {
            if (!m.spline) throw validation_error("far-field form needs a compactly supported function");
            line_.emplace(asymptotic_wave(*m.spline, model.units()));
          } else if constexpr (std::is_same_v<T, model::Bilinear> || std::is_same_v<T, model::Biquadratic>) {
            const auto& form = form2d(m);
            const auto mom = moments(form);
            centre_ = {mom.cx, mom.cy};
          } else {
            throw capability_error("far-field form is implemented for 1D and 2D models");
          }
        },
        model.kind());
  }

  cplx operator()(const Point& p, double t) const {
    if (line_) return (*line_)(p[0], t);
    return std::visit(
        [&](const auto& m) -> cplx {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, model::Bilinear> || std::is_same_v<T, model::Biquadratic>)
            return asymptotic2d(form2d(m), p[0], p[1], t, model_.units(), centre_[0], centre_[1]);
          else
            return {};
        },
        model_.kind());
  }

 private:
  static const EvolvableForm2D& form2d(const model::Bilinear& m) { return m.form; }
  static const EvolvableForm2D& form2d(const model::Biquadratic& m) { return m.result.form; }

  const Model& model_;
  std::optional<AsymptoticWave1D> line_;
  std::array<double, 2> centre_{};
};

/// Relative L2 gaps between the exact evolution and the far-field form of a
/// free 1D model.
inline oracle::AsymptoticGap far_field_gap(const Model& model, double t) {
  const auto* line = std::get_if<model::Line>(&model.kind());
  if (!line || model.units().is_oscillator()) throw capability_error("far-field gap is implemented for free 1D models");
  if (!line->spline) throw validation_error("far-field gap needs a compactly supported function");
  return oracle::asymptotic_gap(*line->spline, t, model.units());
}

// ---------------------------------------------------------------------------
// Oracle comparison

struct ComparisonLine {
  std::string label;
  double deviation = 0.0;
  std::size_t points = 0;
};

struct ComparisonReport {
  std::string oracle;
  std::vector<ComparisonLine> lines;
  std::vector<double> orders;  // residual only
  double tolerance = 0.0;
  bool pass = true;
  std::string note;
};

namespace detail {

inline std::vector<double> default_times(const Model& m) {
  std::vector<double> out;
  for (double s : {0.1, 0.2, 0.5, 1.0}) out.push_back(s * m.time_unit());
  return out;
}

inline std::vector<oracle::Cell2D> biquadratic_cells(const BiquadraticSpline& s) {
  std::vector<oracle::Cell2D> cells;
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i)
    for (std::size_t j = 0; j + 1 < s.y.size(); ++j) {
      if (!s.occupied(i, j)) continue;
      const double x0 = s.x[i], x1 = s.x[i + 1], y0 = s.y[j], y1 = s.y[j + 1];
      cells.push_back({x0, x1, y0, y1, [&s, i, j, x0, x1, y0, y1](double x, double y) {
                         return s.cell_derivative(i, j, 0, 0, (x - x0) / (x1 - x0), (y - y0) / (y1 - y0));
                       }});
    }
  return cells;
}

}  // namespace detail

/// Pointwise comparison with direct quadrature of the propagator. Lines use
/// 200 points over centre +- 5a(1 + t/T), radial profiles 50 radii, grids a
/// lattice of 25 (2D) or 27 (3D) points.
inline ComparisonReport compare_quadrature(const Model& model, std::vector<double> times = {}) {
  if (times.empty()) times = detail::default_times(model);
  ComparisonReport rep{"quadrature", {}, {}, 1e-8, true, {}};
  const double a = model.length_scale(), T = model.time_unit();
  const auto& u = model.units();
  if (u.is_oscillator() && model.dimension() > 1 && !model.radial())
    throw capability_error("oscillator quadrature oracle is one-dimensional");
  for (double t : times) {
    if (!(t > 0.0)) throw domain_error("quadrature comparison needs t > 0");
    const double reach = 5.0 * a * (1.0 + t / T);
    double worst = 0.0;
    std::size_t count = 0;
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, model::Line>) {
            if (!m.spline) throw validation_error("quadrature oracle needs a compactly supported function");
            const double c = m.form.center();
            count = 200;
            std::vector<double> dev(count);
            parallel_for(count, [&](std::size_t lo, std::size_t hi) {
              for (std::size_t k = lo; k < hi; ++k) {
                const double x = c - reach + 2.0 * reach * static_cast<double>(k) / (count - 1);
                const cplx q = u.is_oscillator() ? oracle::quadrature_evolve_oscillator(*m.spline, x, t, u).value
                                                 : oracle::quadrature_evolve_free(*m.spline, x, t, u).value;
                dev[k] = std::abs(model({x, 0.0, 0.0}, t) - q);
              }
            });
            worst = *std::max_element(dev.begin(), dev.end());
          } else if constexpr (std::is_same_v<M, model::Radial>) {
            count = 50;
            std::vector<double> dev(count);
            parallel_for(count, [&](std::size_t lo, std::size_t hi) {
              for (std::size_t k = lo; k < hi; ++k) {
                const double r = reach * static_cast<double>(k + 1) / count;
                const cplx q = (u.is_oscillator() ? oracle::quadrature_evolve_oscillator(m.odd, r, t, u).value
                                                  : oracle::quadrature_evolve_free(m.odd, r, t, u).value) /
                               r;
                dev[k] = std::abs(model({r, 0.0, 0.0}, t) - q);
              }
            });
            worst = *std::max_element(dev.begin(), dev.end());
          } else if constexpr (std::is_same_v<M, model::Bilinear> || std::is_same_v<M, model::Biquadratic>) {
            const double span = 0.4 * reach;
            std::vector<oracle::Cell2D> cells;
            const EvolvableForm2D* form = nullptr;
            if constexpr (std::is_same_v<M, model::Biquadratic>) {
              rep.tolerance = 1e-6;
              cells = detail::biquadratic_cells(m.result.spline);
              form = &m.result.form;
            } else {
              form = &m.form;
            }
            const double cx = 0.5 * (form->ax().front() + form->ax().back());
            const double cy = 0.5 * (form->ay().front() + form->ay().back());
            count = 25;
            std::vector<double> dev(count);
            parallel_for(count, [&](std::size_t lo, std::size_t hi) {
              for (std::size_t k = lo; k < hi; ++k) {
                const double x = cx - span + 2.0 * span * static_cast<double>(k / 5) / 4.0;
                const double y = cy - span + 2.0 * span * static_cast<double>(k % 5) / 4.0;
                cplx q;
                if constexpr (std::is_same_v<M, model::Bilinear>)
                  q = oracle::quadrature_evolve_bilinear(m.grid, x, y, t, u).value;
                else
                  q = oracle::quadrature_evolve_cells(cells, x, y, t, u).value;
                dev[k] = std::abs(model({x, y, 0.0}, t) - q);
              }
            });
            worst = *std::max_element(dev.begin(), dev.end());
          } else {
            const double span = 0.3 * reach;
            const double cx = 0.5 * (m.grid.x.front() + m.grid.x.back());
            const double cy = 0.5 * (m.grid.y.front() + m.grid.y.back());
            const double cz = 0.5 * (m.grid.z.front() + m.grid.z.back());
            count = 27;
            std::vector<double> dev(count);
            parallel_for(count, [&](std::size_t lo, std::size_t hi) {
              for (std::size_t k = lo; k < hi; ++k) {
                const Point p{cx - span + span * static_cast<double>(k / 9),
                              cy - span + span * static_cast<double>(k / 3 % 3), cz - span + span * static_cast<double>(k % 3)};
                const cplx q = oracle::quadrature_evolve_trilinear(m.grid, p[0], p[1], p[2], t, u).value;
                dev[k] = std::abs(model(p, t) - q);
              }
            });
            worst = *std::max_element(dev.begin(), dev.end());
          }
        },
        model.kind());
    rep.lines.push_back({"t=" + detail::short_number(t), worst, count});
    rep.pass = rep.pass && worst < rep.tolerance;
  }
  return rep;
}

/// Transform of a line (or of a radial profile's odd extension) against the
/// segment-exact oracle at 400 wavenumbers on [-20/a, 20/a].
inline ComparisonReport compare_fourier(const Model& model) {
  const EvolvableForm1D* form = nullptr;
  const Spline1D* spline = nullptr;
  if (const auto* l = std::get_if<model::Line>(&model.kind())) {
    form = &l->form;
    if (l->spline) spline = &*l->spline;
  } else if (const auto* r = std::get_if<model::Radial>(&model.kind())) {
    form = &r->form;
    spline = &r->odd;
  } else {
    throw capability_error("Fourier oracle is one-dimensional");
  }
  if (!spline) throw validation_error("Fourier oracle needs a compactly supported function");
  ComparisonReport rep{"fourier", {}, {}, 1e-10, true, {}};
  const double kmax = 20.0 / model.length_scale();
  constexpr std::size_t n = 400;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = -kmax + 2.0 * kmax * static_cast<double>(k) / (n - 1);
    worst = std::max(worst, std::abs(fourier_transform(*form, kk) - oracle::numerical_fourier(*spline, kk)));
  }
  rep.lines.push_back({"k in [-20/a, 20/a]", worst, n});
  rep.pass = worst < rep.tolerance;
  return rep;
}

/// Finite-difference residual of the evolution at steps a(0.04, 0.02, 0.01)
/// over centre +- 2a and t in [T/2, T], T = min(m a^2 / hbar, pi / (4 omega)).
/// Radial models are checked through r psi, which obeys the 1D equation.
inline ComparisonReport compare_residual(const Model& model) {
  ComparisonReport rep{"residual", {}, {}, 0.2, true, {}};
  const double a = model.length_scale();
  const auto& u = model.units();
  double T = model.time_unit();
  if (u.is_oscillator()) T = std::min(T, 0.25 * pi / u.omega());
  const std::vector<double> steps{0.04 * a, 0.02 * a, 0.01 * a};
  oracle::ResidualRegion region;
  region.t0 = 0.5 * T;
  region.t1 = T;
  oracle::ResidualReport r;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, model::Line> || std::is_same_v<M, model::Radial>) {
          const double c = m.form.center();
          region.x0 = c - 2.0 * a;
          region.x1 = c + 2.0 * a;
          r = oracle::schrodinger_residual([&](double x, double t) { return evolve(m.form, x, t, u); }, region, steps,
                                           u);
        } else if constexpr (std::is_same_v<M, model::Bilinear> || std::is_same_v<M, model::Biquadratic>) {
          // square region about the origin; grids are expected to be roughly centred
          region.x0 = -2.0 * a;
          region.x1 = 2.0 * a;
          region.samples = 9;
          r = oracle::schrodinger_residual_2d([&](double x, double y, double t) { return model({x, y, 0.0}, t); },
                                              region, steps, u);
        } else {
          throw capability_error("residual oracle is implemented for 1D and 2D models");
        }
      },
      model.kind());
  for (std::size_t k = 0; k < r.steps.size(); ++k)
    rep.lines.push_back({"h=" + detail::short_number(r.steps[k]), r.max_residual[k], 0});
  rep.orders = r.orders;
  for (double o : r.orders) rep.pass = rep.pass && std::abs(o - 2.0) <= rep.tolerance;
  return rep;
}

}  // namespace splinewave

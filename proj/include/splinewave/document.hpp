#pragma once

// Versioned JSON documents describing a wave function. Complex numbers are
// [re, im] pairs (a bare number is read as real). Canonical text is the
// sorted-key dump with two-space indent, so serialise(parse(text)) == text
// for any canonical input.

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "splinewave/core.hpp"
#include "splinewave/spline1d.hpp"

namespace splinewave {

inline constexpr int kSchemaVersion = 1;

/// Malformed document. `where` is a JSON pointer for field errors or
/// "line L, column C" for syntax errors.
struct document_error : error {
  std::string where;
  document_error(std::string at, const std::string& what) : error(at + ": " + what), where(std::move(at)) {}
};

enum class Dynamics { free, oscillator };

namespace doc {

struct JunctionValues {
  std::vector<double> junctions;
  std::vector<cplx> values;
  int degree = 1;
  std::vector<cplx> seeds;
};

/// Explicit polynomial pieces, coefficients in powers of (x - left end).
struct Segments {
  std::vector<double> junctions;
  std::vector<std::vector<cplx>> coefficients;
};

struct Layers {
  std::vector<double> junctions;
  std::vector<Layer> layers;
};

struct Fixture {
  std::string name;
  double a = 1.0;
  double b = 1.0;  // trapezium ramp width
};

struct Grid2D {
  enum class Kind { bilinear, biquadratic };
  Kind kind = Kind::bilinear;
  std::vector<double> x, y;
  CMatrix values;
  std::optional<CMatrix> phi_x, phi_y;
  std::optional<Matrix2<char>> occupied;
  std::size_t seed_i = 0, seed_j = 0;
  cplx seed_xy{0.0, 0.0};
};

struct Grid3D {
  std::vector<double> x, y, z;
  CArray3 values;
};

/// Spherically symmetric profile psi(r) as polynomial pieces starting at r = 0.
struct Radial {
  Segments profile;
};

using Definition = std::variant<JunctionValues, Segments, Layers, Fixture, Grid2D, Grid3D, Radial>;

inline constexpr const char* definition_keys[] = {"junction_values", "segments", "layers", "fixture",
                                                 "grid2d",          "grid3d",   "radial"};

}  // namespace doc

struct SplineDocument {
  int schema_version = kSchemaVersion;
  int dimension = 1;
  Dynamics dynamics = Dynamics::free;
  PhysicalUnits units;
  doc::Definition definition;
};

/// Dimension a named fixture lives in; 0 for unknown names.
inline int fixture_dimension(std::string_view name) {
  for (auto n : {"square", "triangle", "trapezium", "smooth-hump", "truncated-quadratic"})
    if (name == n) return 1;
  for (auto n : {"disk-bilinear", "corner-indent", "product-2d"})
    if (name == n) return 2;
  for (auto n : {"cubic-radial", "cone-radial"})
    if (name == n) return 3;
  return 0;
}

namespace detail {

using json = nlohmann::json;

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const { throw document_error(path_.empty() ? "/" : path_, what); }

  Reader at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    const auto it = j_.find(key);
    if (it == j_.end()) throw document_error(path_ + "/" + key, "missing field");
    return Reader(*it, path_ + "/" + key);
  }
  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "/" + std::to_string(i)); }

  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("number must be finite");
    return v;
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  std::size_t index() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0))
      fail("expected a non-negative integer");
    return j_.get<std::size_t>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  cplx complex() const {
    if (j_.is_number()) return {number(), 0.0};
    if (!j_.is_array() || j_.size() != 2) fail("expected a complex number [re, im]");
    return {at(0).number(), at(1).number()};
  }

  std::vector<double> reals() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i).number();
    return out;
  }
  std::vector<cplx> complexes() const {
    std::vector<cplx> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i).complex();
    return out;
  }
  CMatrix matrix(std::size_t rows, std::size_t cols) const {
    if (size() != rows) fail("expected " + std::to_string(rows) + " rows");
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      const auto row = at(i);
      if (row.size() != cols) row.fail("expected " + std::to_string(cols) + " entries");
      for (std::size_t k = 0; k < cols; ++k) m(i, k) = row.at(k).complex();
    }
    return m;
  }

  /// Rejects keys outside `allowed`.
  void only(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& [key, _] : j_.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw document_error(path_ + "/" + key, "unknown field");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

inline doc::Segments read_segments(const Reader& r) {
  r.only({"junctions", "coefficients"});
  doc::Segments s;
  s.junctions = r.at("junctions").reals();
  const auto c = r.at("coefficients");
  s.coefficients.resize(c.size());
  for (std::size_t j = 0; j < s.coefficients.size(); ++j) s.coefficients[j] = c.at(j).complexes();
  return s;
}

inline doc::Definition read_definition(const Reader& def) {
  std::vector<std::string> present;
  for (const char* k : doc::definition_keys)
    if (def.has(k)) present.emplace_back(k);
  if (present.size() != 1)
    def.fail("exactly one of junction_values, segments, layers, fixture, grid2d, grid3d, radial is required (found " +
             std::to_string(present.size()) + ")");
  def.only(std::initializer_list<const char*>{present.front().c_str()});
  const std::string& key = present.front();
  const Reader r = def.at(key);

  if (key == "junction_values") {
    r.only({"junctions", "values", "degree", "seeds"});
    doc::JunctionValues v;
    v.junctions = r.at("junctions").reals();
    v.values = r.at("values").complexes();
    v.degree = r.at("degree").integer();
    if (r.has("seeds")) v.seeds = r.at("seeds").complexes();
    return v;
  }
  if (key == "segments") return read_segments(r);
  if (key == "layers") {
    r.only({"junctions", "layers"});
    doc::Layers v;
    v.junctions = r.at("junctions").reals();
    const auto ls = r.at("layers");
    for (std::size_t k = 0; k < ls.size(); ++k) {
      const auto l = ls.at(k);
      l.only({"degree", "weights"});
      v.layers.push_back({l.at("degree").integer(), l.at("weights").complexes()});
    }
    return v;
  }
  if (key == "fixture") {
    r.only({"name", "a", "b"});
    doc::Fixture f;
    f.name = r.at("name").string();
    if (fixture_dimension(f.name) == 0) r.at("name").fail("unknown fixture '" + f.name + "'");
    if (r.has("a")) f.a = r.at("a").number();
    if (r.has("b")) f.b = r.at("b").number();
    if (!(f.a > 0.0) || !(f.b > 0.0)) r.fail("fixture scales must be positive");
    return f;
  }
  if (key == "grid2d") {
    r.only({"kind", "x", "y", "values", "phi_x", "phi_y", "occupied", "seed"});
    doc::Grid2D g;
    const std::string kind = r.has("kind") ? r.at("kind").string() : "bilinear";
    if (kind == "biquadratic")
      g.kind = doc::Grid2D::Kind::biquadratic;
    else if (kind != "bilinear")
      r.at("kind").fail("kind must be bilinear or biquadratic");
    g.x = r.at("x").reals();
    g.y = r.at("y").reals();
    g.values = r.at("values").matrix(g.x.size(), g.y.size());
    if (r.has("phi_x")) g.phi_x = r.at("phi_x").matrix(g.x.size(), g.y.size());
    if (r.has("phi_y")) g.phi_y = r.at("phi_y").matrix(g.x.size(), g.y.size());
    if (g.phi_x.has_value() != g.phi_y.has_value()) r.fail("phi_x and phi_y must be given together");
    if (r.has("occupied")) {
      const auto o = r.at("occupied");
      if (g.x.size() < 2 || g.y.size() < 2) o.fail("grid too small for cells");
      Matrix2<char> cells(g.x.size() - 1, g.y.size() - 1);
      if (o.size() != cells.rows()) o.fail("expected " + std::to_string(cells.rows()) + " rows of cells");
      for (std::size_t i = 0; i < cells.rows(); ++i) {
        const auto row = o.at(i);
        if (row.size() != cells.cols()) row.fail("expected " + std::to_string(cells.cols()) + " cells");
        for (std::size_t j = 0; j < cells.cols(); ++j) {
          const int c = row.at(j).integer();
          if (c != 0 && c != 1) row.at(j).fail("cell flags are 0 or 1");
          cells(i, j) = static_cast<char>(c);
        }
      }
      g.occupied = std::move(cells);
    }
    if (r.has("seed")) {
      const auto s = r.at("seed");
      s.only({"i", "j", "xy"});
      g.seed_i = s.at("i").index();
      g.seed_j = s.at("j").index();
      g.seed_xy = s.at("xy").complex();
    }
    if (g.kind == doc::Grid2D::Kind::bilinear && (g.phi_x || g.occupied || r.has("seed")))
      r.fail("slopes, cells and seed apply to biquadratic grids only");
    return g;
  }
  if (key == "grid3d") {
    r.only({"x", "y", "z", "values"});
    doc::Grid3D g;
    g.x = r.at("x").reals();
    g.y = r.at("y").reals();
    g.z = r.at("z").reals();
    g.values = CArray3(g.x.size(), g.y.size(), g.z.size());
    const auto v = r.at("values");
    if (v.size() != g.x.size()) v.fail("expected " + std::to_string(g.x.size()) + " slabs");
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const auto m = v.at(i).matrix(g.y.size(), g.z.size());
      for (std::size_t j = 0; j < g.y.size(); ++j)
        for (std::size_t k = 0; k < g.z.size(); ++k) g.values(i, j, k) = m(j, k);
    }
    return g;
  }
  r.only({"profile"});
  return doc::Radial{read_segments(r.at("profile"))};
}

inline int definition_dimension(const doc::Definition& d) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, doc::Fixture>)
          return fixture_dimension(v.name);
        else if constexpr (std::is_same_v<T, doc::Grid2D>)
          return 2;
        else if constexpr (std::is_same_v<T, doc::Grid3D> || std::is_same_v<T, doc::Radial>)
          return 3;
        else
          return 1;
      },
      d);
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json complex_list(const std::vector<cplx>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(complex_json(z));
  return out;
}

inline json matrix_json(const CMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline json segments_json(const doc::Segments& s) {
  json c = json::array();
  for (const auto& seg : s.coefficients) c.push_back(complex_list(seg));
  return {{"junctions", s.junctions}, {"coefficients", std::move(c)}};
}

inline json definition_json(const doc::Definition& d) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, doc::JunctionValues>) {
          json j{{"junctions", v.junctions}, {"values", complex_list(v.values)}, {"degree", v.degree}};
          if (!v.seeds.empty()) j["seeds"] = complex_list(v.seeds);
          return {{"junction_values", std::move(j)}};
        } else if constexpr (std::is_same_v<T, doc::Segments>) {
          return {{"segments", segments_json(v)}};
        } else if constexpr (std::is_same_v<T, doc::Layers>) {
          json ls = json::array();
          for (const auto& l : v.layers) ls.push_back({{"degree", l.degree}, {"weights", complex_list(l.weights)}});
          return {{"layers", {{"junctions", v.junctions}, {"layers", std::move(ls)}}}};
        } else if constexpr (std::is_same_v<T, doc::Fixture>) {
          json j{{"name", v.name}, {"a", v.a}};
          if (v.name == "trapezium") j["b"] = v.b;
          return {{"fixture", std::move(j)}};
        } else if constexpr (std::is_same_v<T, doc::Grid2D>) {
          json j{{"x", v.x}, {"y", v.y}, {"values", matrix_json(v.values)}};
          if (v.kind == doc::Grid2D::Kind::biquadratic) {
            j["kind"] = "biquadratic";
            if (v.phi_x) j["phi_x"] = matrix_json(*v.phi_x);
            if (v.phi_y) j["phi_y"] = matrix_json(*v.phi_y);
            if (v.occupied) {
              json cells = json::array();
              for (std::size_t i = 0; i < v.occupied->rows(); ++i) {
                json row = json::array();
                for (std::size_t k = 0; k < v.occupied->cols(); ++k) row.push_back(int((*v.occupied)(i, k)));
                cells.push_back(std::move(row));
              }
              j["occupied"] = std::move(cells);
            }
            j["seed"] = {{"i", v.seed_i}, {"j", v.seed_j}, {"xy", complex_json(v.seed_xy)}};
          } else {
            j["kind"] = "bilinear";
          }
          return {{"grid2d", std::move(j)}};
        } else if constexpr (std::is_same_v<T, doc::Grid3D>) {
          json slabs = json::array();
          for (std::size_t i = 0; i < v.values.nx(); ++i) {
            CMatrix m(v.values.ny(), v.values.nz());
            for (std::size_t j = 0; j < m.rows(); ++j)
              for (std::size_t k = 0; k < m.cols(); ++k) m(j, k) = v.values(i, j, k);
            slabs.push_back(matrix_json(m));
          }
          return {{"grid3d", {{"x", v.x}, {"y", v.y}, {"z", v.z}, {"values", std::move(slabs)}}}};
        } else {
          return {{"radial", {{"profile", segments_json(v.profile)}}}};
        }
      },
      d);
}

}  // namespace detail

/// Line and column of a byte offset, both 1-based.
inline std::pair<std::size_t, std::size_t> text_position(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline SplineDocument parse_document(std::string_view text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    // nlohmann reports the offset just past the offending character
    const auto [line, col] = text_position(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw document_error("line " + std::to_string(line) + ", column " + std::to_string(col), what);
  }
  const detail::Reader root(j, "");
  root.only({"schema_version", "dimension", "dynamics", "units", "definition"});
  SplineDocument d;
  d.schema_version = root.at("schema_version").integer();
  if (d.schema_version != kSchemaVersion)
    root.at("schema_version").fail("unsupported schema version " + std::to_string(d.schema_version));
  d.dimension = root.at("dimension").integer();
  if (d.dimension < 1 || d.dimension > 3) root.at("dimension").fail("dimension must be 1, 2 or 3");
  const std::string dyn = root.has("dynamics") ? root.at("dynamics").string() : "free";
  if (dyn == "oscillator")
    d.dynamics = Dynamics::oscillator;
  else if (dyn != "free")
    root.at("dynamics").fail("dynamics must be free or oscillator");

  double m = 1.0, hbar = 1.0, omega = 0.0;
  if (root.has("units")) {
    const auto u = root.at("units");
    u.only({"m", "hbar", "omega"});
    if (u.has("m")) m = u.at("m").number();
    if (u.has("hbar")) hbar = u.at("hbar").number();
    if (u.has("omega")) omega = u.at("omega").number();
  }
  if (!(m > 0.0) || !(hbar > 0.0) || omega < 0.0) throw document_error("/units", "need m > 0, hbar > 0, omega >= 0");
  if (d.dynamics == Dynamics::oscillator && !(omega > 0.0)) root.fail("oscillator dynamics need omega > 0");
  if (d.dynamics == Dynamics::free && omega != 0.0) root.fail("free dynamics need omega = 0");
  d.units = PhysicalUnits(m, hbar, omega);

  d.definition = detail::read_definition(root.at("definition"));
  if (const int dim = detail::definition_dimension(d.definition); dim != d.dimension)
    root.at("dimension").fail("definition is " + std::to_string(dim) + "-dimensional");
  return d;
}

inline nlohmann::json to_json(const SplineDocument& d) {
  return {{"schema_version", d.schema_version},
          {"dimension", d.dimension},
          {"dynamics", d.dynamics == Dynamics::oscillator ? "oscillator" : "free"},
          {"units", {{"m", d.units.m()}, {"hbar", d.units.hbar()}, {"omega", d.units.omega()}}},
          {"definition", detail::definition_json(d.definition)}};
}

/// Canonical text, newline terminated.
inline std::string serialise(const SplineDocument& d) { return to_json(d).dump(2) + "\n"; }

}  // namespace splinewave

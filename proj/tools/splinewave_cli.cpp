// splinewave: validate, evolve and check spline wave functions described by
// JSON documents. Exit status 0 on success, 1 when a document or a check
// fails, 2 on bad usage.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "splinewave/splinewave.hpp"

namespace sw = splinewave;

namespace {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double to_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v))
    throw usage_error(fmt::format("{}: '{}' is not a number", what, s));
  return v;
}

sw::AxisRange parse_range(const std::string& text, std::string_view flag) {
  std::vector<std::string_view> parts;
  std::string_view rest = text;
  for (std::size_t p; (p = rest.find(':')) != std::string_view::npos; rest.remove_prefix(p + 1))
    parts.push_back(rest.substr(0, p));
  parts.push_back(rest);
  if (parts.size() != 3) throw usage_error(fmt::format("{} expects lo:hi:n, got '{}'", flag, text));
  sw::AxisRange r{to_double(parts[0], flag), to_double(parts[1], flag), 0};
  const auto [end, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), r.n);
  if (ec != std::errc{} || end != parts[2].data() + parts[2].size() || r.n < 1)
    throw usage_error(fmt::format("{}: point count must be a positive integer", flag));
  if (r.n > 1 && !(r.hi > r.lo)) throw usage_error(fmt::format("{}: need lo < hi", flag));
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

sw::SplineDocument load(const std::string& path) { return sw::parse_document(read_file(path)); }

std::string num(double v) { return fmt::format("{:.17g}", v); }

// Report values: 12 digits, no negative zero.
std::string short_num(double v) { return fmt::format("{:.12g}", v == 0.0 ? 0.0 : v); }

std::string short_cplx(sw::cplx z) {
  if (z.imag() == 0.0) return short_num(z.real());
  return fmt::format("({},{})", short_num(z.real()), short_num(z.imag()));
}

std::string join(const std::vector<sw::cplx>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + short_cplx(v[i]);
  return s;
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

std::string model_name(const sw::Model& m) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, sw::model::Line>) return "line";
        if constexpr (std::is_same_v<T, sw::model::Radial>) return "radial";
        if constexpr (std::is_same_v<T, sw::model::Bilinear>) return "bilinear grid";
        if constexpr (std::is_same_v<T, sw::model::Biquadratic>) return "biquadratic grid";
        return "trilinear grid";
      },
      m.kind());
}

// ---------------------------------------------------------------------------

int run_validate(const std::string& path) {
  const auto doc = load(path);
  std::unique_ptr<sw::Model> model;
  try {
    model = std::make_unique<sw::Model>(doc);
  } catch (const sw::error& e) {
    fmt::print("FAIL construction: {}\nresult: FAIL\n", e.what());
    return 1;
  }
  const auto rep = sw::validate(*model);
  fmt::print("model: {} ({}D, {} dynamics)\n", model_name(*model), model->dimension(),
             doc.dynamics == sw::Dynamics::oscillator ? "oscillator" : "free");
  for (const auto& c : rep.checks) fmt::print("{} {}: {}\n", verdict(c.pass), c.name, c.detail);
  if (!rep.purity.empty()) fmt::print("purity: {}\n", rep.purity);
  for (const auto& w : rep.weights) {
    if (w.row_at.empty()) {
      fmt::print("{}: {}\n", w.label, join(w.rows.front()));
      continue;
    }
    fmt::print("{} (rows by x junction):\n", w.label);
    for (std::size_t i = 0; i < w.rows.size(); ++i) fmt::print("  x={}: {}\n", short_num(w.row_at[i]), join(w.rows[i]));
  }
  fmt::print("result: {}\n", verdict(rep.pass()));
  return rep.pass() ? 0 : 1;
}

struct SampleOptions {
  std::vector<double> times;
  std::string xrange, yrange, zrange;
  std::string out = "csv";
  std::string scaled_xi;
};

sw::SampleGrid sample_grid(const sw::Model& m, const SampleOptions& o) {
  sw::SampleGrid g;
  g.times = o.times;
  for (double t : g.times)
    if (!std::isfinite(t) || t < 0.0) throw usage_error("times must be finite and non-negative");
  const int axes = m.sample_axes();
  const std::string* ranges[3] = {&o.xrange, &o.yrange, &o.zrange};
  for (int d = 0; d < 3; ++d) {
    const char* flag[3] = {"--xrange", "--yrange", "--zrange"};
    if (d < axes) {
      if (ranges[d]->empty()) throw usage_error(fmt::format("{} is required for this document", flag[d]));
      g.axes.push_back(parse_range(*ranges[d], flag[d]));
    } else if (!ranges[d]->empty()) {
      throw usage_error(fmt::format("{} does not apply to a {}-axis document", flag[d], axes));
    }
  }
  return g;
}

std::vector<std::string> coordinate_columns(const sw::Model& m) {
  if (m.radial()) return {"r"};
  const std::vector<std::string> all{"x", "y", "z"};
  return {all.begin(), all.begin() + m.sample_axes()};
}

void emit(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows,
          const std::string& out) {
  if (out == "json") {
    nlohmann::json j{{"columns", columns}, {"rows", rows}};
    std::cout << j.dump() << "\n";
    return;
  }
  std::string line;
  for (std::size_t c = 0; c < columns.size(); ++c) line += (c ? "," : "") + columns[c];
  std::cout << line << "\n";
  for (const auto& r : rows) {
    line.clear();
    for (std::size_t c = 0; c < r.size(); ++c) line += (c ? "," : "") + num(r[c]);
    std::cout << line << "\n";
  }
}

int run_evolve(const std::string& path, const SampleOptions& o) {
  const sw::Model model(load(path));
  const auto grid = sample_grid(model, o);
  std::optional<double> tau;
  if (!o.scaled_xi.empty()) {
    if (o.scaled_xi.rfind("tau=", 0) != 0) throw usage_error("--scaled-xi expects tau=<value>");
    tau = to_double(std::string_view(o.scaled_xi).substr(4), "--scaled-xi");
    if (!(*tau > 0.0)) throw usage_error("--scaled-xi: tau must be positive");
    if (model.sample_axes() != 1) throw usage_error("--scaled-xi applies to single-axis documents");
  }
  const auto samples = sw::sample(model, grid);
  auto columns = coordinate_columns(model);
  columns.insert(columns.begin(), "t");
  if (tau) columns.push_back("xi");
  for (const char* c : {"re", "im", "abs"}) columns.emplace_back(c);
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) {
    std::vector<double> r{s.t};
    for (int d = 0; d < model.sample_axes(); ++d) r.push_back(s.p[static_cast<std::size_t>(d)]);
    if (tau) r.push_back(s.p[0] * std::sqrt(1.0 + s.t * s.t / (*tau * *tau)));
    r.insert(r.end(), {s.value.real(), s.value.imag(), std::abs(s.value)});
    rows.push_back(std::move(r));
  }
  emit(columns, rows, o.out);
  return 0;
}

int run_asymptote(const std::string& path, const SampleOptions& o) {
  const sw::Model model(load(path));
  for (double t : o.times)
    if (!(t > 0.0)) throw usage_error("far-field times must be positive");
  if (o.xrange.empty()) {
    // gap table only
    std::vector<std::vector<double>> rows;
    for (double t : o.times) {
      const auto g = sw::far_field_gap(model, t);
      rows.push_back({t, g.complex_gap, g.modulus_gap, g.identity_gap});
    }
    emit({"t", "complex_gap", "modulus_gap", "identity_gap"}, rows, o.out);
    return 0;
  }
  const sw::FarField far(model);
  const auto grid = sample_grid(model, o);
  const auto exact = sw::sample(model, grid);
  std::vector<sw::cplx> asym(exact.size());
  sw::parallel_for(exact.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) asym[k] = far(exact[k].p, exact[k].t);
  });
  auto columns = coordinate_columns(model);
  columns.insert(columns.begin(), "t");
  for (const char* c : {"re", "im", "abs", "exact_re", "exact_im", "exact_abs"}) columns.emplace_back(c);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    std::vector<double> r{exact[k].t};
    for (int d = 0; d < model.sample_axes(); ++d) r.push_back(exact[k].p[static_cast<std::size_t>(d)]);
    r.insert(r.end(), {asym[k].real(), asym[k].imag(), std::abs(asym[k]), exact[k].value.real(),
                       exact[k].value.imag(), std::abs(exact[k].value)});
    rows.push_back(std::move(r));
  }
  emit(columns, rows, o.out);
  return 0;
}

int run_compare(const std::string& path, const std::string& oracle, const std::vector<double>& times) {
  const sw::Model model(load(path));
  sw::ComparisonReport rep;
  if (oracle == "quadrature")
    rep = sw::compare_quadrature(model, times);
  else if (oracle == "fourier")
    rep = sw::compare_fourier(model);
  else
    rep = sw::compare_residual(model);
  fmt::print("oracle: {}\n", rep.oracle);
  if (rep.oracle == "residual") {
    for (const auto& l : rep.lines) fmt::print("{} max residual {:.6e}\n", l.label, l.deviation);
    std::string orders;
    for (double o : rep.orders) orders += fmt::format(" {:.4f}", o);
    fmt::print("convergence order:{} (expected 2 +- {})\n", orders, rep.tolerance);
  } else {
    for (const auto& l : rep.lines)
      fmt::print("{} max deviation {:.6e} over {} points\n", l.label, l.deviation, l.points);
    fmt::print("tolerance {:.0e}\n", rep.tolerance);
  }
  fmt::print("result: {}\n", verdict(rep.pass));
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact free and oscillator evolution of spline wave functions"};
  app.require_subcommand(1);

  std::string file;
  SampleOptions opts;
  std::string oracle;

  auto* validate = app.add_subcommand("validate", "parse a document, check compact support and report jump weights");
  validate->add_option("file", file, "document")->required();

  auto add_sampling = [&](CLI::App* cmd, const char* times_flag) {
    cmd->add_option("file", file, "document")->required();
    cmd->add_option(times_flag, opts.times, "comma-separated times")->delimiter(',')->required();
    cmd->add_option("--xrange", opts.xrange, "lo:hi:n (r for radial documents)");
    cmd->add_option("--yrange", opts.yrange, "lo:hi:n");
    cmd->add_option("--zrange", opts.zrange, "lo:hi:n");
    cmd->add_option("--out", opts.out, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* evolve = app.add_subcommand("evolve", "sample psi on a grid at each time");
  add_sampling(evolve, "--times");
  evolve->add_option("--scaled-xi", opts.scaled_xi, "tau=<v>: add xi = x sqrt(1 + t^2/tau^2)");

  auto* asymptote = app.add_subcommand("asymptote", "far-field form; without --xrange print the L2 gap table");
  add_sampling(asymptote, "--time");

  auto* compare = app.add_subcommand("compare", "compare against an independent oracle");
  compare->add_option("file", file, "document")->required();
  compare->add_option("--oracle", oracle, "quadrature, fourier or residual")
      ->required()
      ->check(CLI::IsMember({"quadrature", "fourier", "residual"}));
  compare->add_option("--times", opts.times, "comma-separated times (quadrature)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return run_validate(file);
    if (*evolve) return run_evolve(file, opts);
    if (*asymptote) return run_asymptote(file, opts);
    return run_compare(file, oracle, opts.times);
  } catch (const usage_error& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return 2;
  } catch (const sw::document_error& e) {
    fmt::print(stderr, "invalid document: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}

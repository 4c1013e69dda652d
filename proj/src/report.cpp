#include "curvlab/report.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvlab/identities.hpp"

namespace curvlab::report {

namespace hs = hypersurface;
using nlohmann::json;

// ---------------------------------------------------------------------------
// config file

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    std::string s;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      if (c == '#' && !quoted) break;
      s += c;
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("config line " + std::to_string(ln) + ": unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError("config line " + std::to_string(ln) + ": empty section");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(ln) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(ln) + ": empty key");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(ln) + ": key outside any [section]");
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    cfg.values[section + "." + key] = val;
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config_text(buf.str());
  cfg.source_path = path;
  return cfg;
}

bool RunConfig::has(const std::string& key) const { return values.count(key) > 0; }

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::string RunConfig::require_string(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing required config key: " + key);
  return it->second;
}

double RunConfig::get_real(const std::string& key, double fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || trim(end) != "")
    throw ConfigError("config key " + key + ": not a number: '" + it->second + "'");
  return v;
}

long long RunConfig::get_int(const std::string& key, long long fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (trim(it->second.substr(used)) != "") throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not an integer: '" + it->second + "'");
  }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("config key " + key + ": not a boolean: '" + it->second + "'");
}

std::vector<double> RunConfig::get_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || trim(end) != "")
      throw ConfigError("config key " + key + ": bad list element '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("config key " + key + ": empty list");
  return out;
}

// ---------------------------------------------------------------------------
// polynomial parser: terms joined by +/-, factors joined by *, each factor a
// number or x<i>[^p] with 1-based variable index

std::vector<hs::MonomialTerm> parse_polynomial(const std::string& text, int dim) {
  std::vector<hs::MonomialTerm> out;
  size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_int = [&](const char* what) {
    skip();
    const size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw ConfigError(std::string("polynomial: expected ") + what);
    return std::stoi(text.substr(start, pos - start));
  };
  skip();
  double sign = 1.0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') sign = -1.0;
    ++pos;
  }
  while (pos < text.size()) {
    hs::MonomialTerm term;
    term.coeff = sign;
    term.powers.assign(dim, 0);
    while (true) {
      skip();
      if (pos < text.size() && (text[pos] == 'x' || text[pos] == 'X')) {
        ++pos;
        const int idx = read_int("variable index after x");
        if (idx < 1 || idx > dim)
          throw ConfigError("polynomial: variable index out of range: x" + std::to_string(idx));
        int p = 1;
        skip();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          p = read_int("exponent after ^");
        }
        term.powers[idx - 1] += p;
      } else {
        char* end = nullptr;
        const double v = std::strtod(text.c_str() + pos, &end);
        if (end == text.c_str() + pos)
          throw ConfigError("polynomial: parse error near '" + text.substr(pos) + "'");
        pos = static_cast<size_t>(end - text.c_str());
        term.coeff *= v;
      }
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    out.push_back(term);
    skip();
    if (pos >= text.size()) break;
    if (text[pos] == '+') {
      sign = 1.0;
    } else if (text[pos] == '-') {
      sign = -1.0;
    } else {
      throw ConfigError("polynomial: unexpected character '" + std::string(1, text[pos]) + "'");
    }
    ++pos;
    skip();
    if (pos >= text.size()) throw ConfigError("polynomial: trailing operator");
  }
  if (out.empty()) throw ConfigError("polynomial: empty expression");
  return out;
}

// ---------------------------------------------------------------------------
// geometry builders

namespace {

ambient::WarpedProduct build_warp(const RunConfig& cfg, int n) {
  const std::string warp = cfg.get_string("ambient.warp", "cosh");
  const double t0 = cfg.get_real("ambient.t0", 3.0);
  const double k = cfg.get_real("ambient.k", 1.0);
  const std::string fiber = cfg.get_string("ambient.fiber", "sphere");
  const auto kind = fiber == "torus" ? ambient::FiberKind::FlatTorus
                    : fiber == "sphere"
                        ? ambient::FiberKind::RoundSphere
                        : throw ConfigError("ambient.fiber must be sphere or torus");
  ambient::WarpedProduct w;
  if (warp == "cosh") {
    w = ambient::make_cosh_warped(t0, n, k);
    w.fiber_kind = kind;
  } else if (warp == "polynomial") {
    w = ambient::make_polynomial_warped(t0, cfg.get_real("ambient.c0", 1.0),
                                        cfg.get_real("ambient.c2", 0.5),
                                        cfg.get_real("ambient.c4", 0.0), n, k);
    w.fiber_kind = kind;
  } else if (warp == "tabulated") {
    std::vector<double> ts = cfg.get_list("ambient.warp_t", {});
    std::vector<double> hsv = cfg.get_list("ambient.warp_h", {});
    w = ambient::make_tabulated_warped(ts, hsv, kind, k, n);
  } else {
    throw ConfigError("ambient.warp must be cosh, polynomial or tabulated");
  }
  if (kind == ambient::FiberKind::FlatTorus && cfg.get_real("ambient.k", 0.0) != 0.0)
    throw ConfigError("flat torus fiber requires k = 0");
  return w;
}

std::vector<double> read_radius_csv(const std::string& path, int expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open radius table: " + path);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("radius") != std::string::npos) continue;  // header
    }
    const auto comma = line.rfind(',');
    const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) throw ConfigError("radius table: bad row '" + line + "'");
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != expected)
    throw ConfigError("radius table: expected " + std::to_string(expected) + " rows, got " +
                      std::to_string(values.size()));
  return values;
}

// global polynomial least squares on the grid nodes: the spectral
// differentiation route for tabulated data
hs::FieldPtr fit_tabulated_radius(const hs::ParamGrid& grid, const std::vector<double>& values,
                                  int degree) {
  const int dim = static_cast<int>(grid.nodes.cols());
  std::vector<std::vector<int>> basis;
  std::vector<int> powers(dim, 0);
  const std::function<void(int, int)> enumerate = [&](int var, int remaining) {
    if (var == dim) {
      basis.push_back(powers);
      return;
    }
    for (int p = 0; p <= remaining; ++p) {
      powers[var] = p;
      enumerate(var + 1, remaining - p);
    }
    powers[var] = 0;
  };
  enumerate(0, degree);

  const int N = grid.size(), M = static_cast<int>(basis.size());
  Eigen::MatrixXd A(N, M);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j) {
      double m = 1.0;
      for (int d = 0; d < dim; ++d) m *= std::pow(grid.nodes(i, d), basis[j][d]);
      A(i, j) = m;
    }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(values.data(), N);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const Eigen::VectorXd c = svd.solve(y);
  std::vector<hs::MonomialTerm> poly;
  for (int j = 0; j < M; ++j) {
    if (c[j] == 0.0) continue;
    poly.push_back({c[j], basis[j]});
  }
  return hs::polynomial_field(poly);
}

struct GeometryParts {
  hs::RadialGraph surface;
  hs::ParamGrid grid;
};

GeometryParts build_parts(const RunConfig& cfg, double amplitude) {
  const int n = static_cast<int>(cfg.get_int("grid.n", 2));
  const int degree = static_cast<int>(cfg.get_int("grid.degree", 20));
  const std::string type = cfg.get_string("ambient.type", "space_form");
  const std::string family = cfg.get_string("surface.family", "sphere");
  const double rho = cfg.get_real("surface.rho", 1.0);

  GeometryParts parts;
  if (type == "space_form") {
    const double delta = cfg.get_real("ambient.delta", 0.0);
    parts.grid = hs::build_grid(n, degree);
    hs::FieldPtr radius;
    if (family == "sphere") {
      radius = hs::constant_field(rho);
    } else if (family == "ellipsoid") {
      std::vector<double> ax = cfg.get_list("surface.axes", {});
      if (static_cast<int>(ax.size()) != n + 1)
        throw ConfigError("surface.axes: need n+1 entries");
      radius = hs::ellipsoid_radius(Eigen::Map<const Eigen::VectorXd>(ax.data(), n + 1));
    } else if (family == "perturbed_sphere") {
      const auto poly = parse_polynomial(
          cfg.get_string("surface.harmonic", "x1*x2*x3"), n + 1);
      radius = hs::perturbed_sphere_radius(rho, amplitude, poly);
    } else if (family == "tabulated") {
      const auto values =
          read_radius_csv(cfg.require_string("surface.radius_csv"), parts.grid.size());
      radius = fit_tabulated_radius(parts.grid, values,
                                    static_cast<int>(cfg.get_int("surface.fit_degree", 8)));
    } else {
      throw ConfigError("unknown space-form surface family: " + family);
    }
    parts.surface = hs::make_space_form_surface(ambient::SpaceForm{n + 1, delta}, radius);
  } else if (type == "warped") {
    const auto w = build_warp(cfg, n);
    const bool torus = w.fiber_kind == ambient::FiberKind::FlatTorus;
    parts.grid = torus ? hs::build_torus_grid(n, degree) : hs::build_grid(n, degree);
    hs::FieldPtr height;
    if (family == "slice") {
      height = hs::constant_field(rho);
    } else if (family == "perturbed_slice") {
      if (torus) throw ConfigError("perturbed_slice requires a sphere fiber");
      const auto poly = parse_polynomial(
          cfg.get_string("surface.harmonic", "x1*x2*x3"), n + 1);
      height = hs::perturbed_sphere_radius(rho, amplitude, poly);
    } else {
      throw ConfigError("unknown warped surface family: " + family);
    }
    parts.surface = hs::make_warped_surface(w, height);
  } else {
    throw ConfigError("ambient.type must be space_form or warped");
  }
  return parts;
}

}  // namespace

hs::SurfaceGeometry build_geometry(const RunConfig& cfg) {
  auto parts = build_parts(cfg, cfg.get_real("surface.amplitude", 0.01));
  return hs::SurfaceGeometry(std::move(parts.surface), std::move(parts.grid));
}

weingarten::SurfaceFamily build_family(const RunConfig& cfg) {
  const std::string family = cfg.get_string("surface.family", "perturbed_sphere");
  if (family != "perturbed_sphere" && family != "perturbed_slice")
    throw ConfigError("sweeps need a perturbed_sphere or perturbed_slice surface family");
  return [cfg](double t) {
    auto parts = build_parts(cfg, t);
    return hs::SurfaceGeometry(std::move(parts.surface), std::move(parts.grid));
  };
}

aniso::AnisoPtr build_anisotropy(const RunConfig& cfg) {
  const int n = static_cast<int>(cfg.get_int("grid.n", 2));
  const std::string family = cfg.get_string("aniso.family", "ellipsoidal");
  if (family == "constant") return aniso::constant_anisotropy(cfg.get_real("aniso.c", 1.0));
  if (family == "linear") {
    std::vector<double> v = cfg.get_list("aniso.v", std::vector<double>(n + 1, 0.0));
    if (static_cast<int>(v.size()) != n + 1) throw ConfigError("aniso.v: need n+1 entries");
    return aniso::linear_anisotropy(cfg.get_real("aniso.c", 1.0),
                                    Eigen::Map<const Eigen::VectorXd>(v.data(), n + 1));
  }
  if (family == "ellipsoidal") {
    std::vector<double> ax = cfg.get_list("aniso.axes", std::vector<double>(n + 1, 1.0));
    if (static_cast<int>(ax.size()) != n + 1) throw ConfigError("aniso.axes: need n+1 entries");
    return aniso::ellipsoidal_anisotropy(Eigen::Map<const Eigen::VectorXd>(ax.data(), n + 1));
  }
  throw ConfigError("aniso.family must be constant, linear or ellipsoidal");
}

// ---------------------------------------------------------------------------
// serialization

namespace {

json to_json(const identities::IdentityReport& r) {
  json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j[r.is_inequality ? "gap" : "residual"] = r.residual_or_gap;
  j["scale"] = r.relative_scale;
  j["verdict"] = r.verdict;
  j["grid_degree"] = r.grid_degree;
  j["tol"] = r.tol;
  for (const auto& [k, v] : r.extra) j["extra"][k] = v;
  return j;
}

json failed_check(const std::string& name, const std::string& what) {
  json j;
  j["name"] = name;
  j["error"] = what;
  j["verdict"] = false;
  return j;
}

json to_json(const weingarten::DefectReport& d) {
  json j;
  j["eps_l1"] = d.eps_l1;
  j["eps_l2"] = d.eps_l2;
  j["tau_l2"] = d.tau_l2;
  j["tau_np1"] = d.tau_np1;
  j["hr_min"] = d.hr_min;
  j["hr_root_min"] = d.hr_root_min;
  j["hrn1_min"] = d.hrn1_min;
  j["b_sup"] = d.b_sup;
  j["cn_used"] = d.cn_used;
  j["K1"] = d.K1;
  j["K2"] = d.K2;
  j["K3"] = d.K3;
  j["K4"] = d.K4;
  j["chain_lhs"] = d.chain_lhs;
  j["chain_rhs"] = d.chain_rhs;
  j["final_lhs"] = d.final_lhs;
  j["final_rhs"] = d.final_rhs;
  j["chain_ok"] = d.chain_ok;
  return j;
}

json to_json(const ambient::ConditionReport& c) {
  json j = json::array();
  for (const auto& chk : c.checks) {
    json e;
    e["name"] = chk.name;
    e["pass"] = chk.pass;
    e["worst_margin"] = chk.worst_margin;
    e["worst_location"] = chk.worst_location;
    j.push_back(e);
  }
  return j;
}

json config_echo(const RunConfig& cfg) {
  json j;
  for (const auto& [k, v] : cfg.values) j[k] = v;
  return j;
}

weingarten::WeingartenSpec spec_from_config(const RunConfig& cfg, double delta, double rho,
                                            int n) {
  weingarten::WeingartenSpec spec;
  spec.r = static_cast<int>(cfg.get_int("weingarten.r", std::min(2, n)));
  spec.a = cfg.get_real("weingarten.a", 0.0);
  if (cfg.has("weingarten.b")) {
    spec.b = cfg.get_real("weingarten.b", 1.0);
  } else {
    // match the base geodesic sphere of radius rho
    const double k0 = ambient::cdelta(delta, rho) / ambient::sdelta(delta, rho);
    spec.b = std::pow(k0, spec.r) - spec.a * k0;
  }
  spec.validate(n);
  return spec;
}

}  // namespace

// ---------------------------------------------------------------------------
// commands

Report cmd_verify(const RunConfig& cfg) {
  Report rep;
  rep.body["command"] = "verify";
  rep.body["config"] = config_echo(cfg);
  json checks = json::array();
  bool all_pass = true;
  auto run = [&](const std::string& name, const std::function<json()>& fn) {
    try {
      json j = fn();
      if (j.contains("verdict") && !j["verdict"].get<bool>()) all_pass = false;
      checks.push_back(j);
    } catch (const std::exception& e) {
      checks.push_back(failed_check(name, e.what()));
      all_pass = false;
    }
  };

  try {
    hs::SurfaceGeometry geom = build_geometry(cfg);
    const int n = geom.n();
    const double tol = cfg.get_real("check.tol", 1e-6);
    const bool space_form = geom.surface().is_space_form();

    if (space_form) {
      const double delta = geom.surface().space_form->delta;
      for (int r = 1; r <= n; ++r)
        run("minkowski_r" + std::to_string(r),
            [&] { return to_json(identities::minkowski_residual(geom, r, tol)); });
      run("divergence", [&] { return to_json(identities::divergence_identity(geom, tol)); });
      run("heintze_karcher", [&] { return to_json(identities::heintze_karcher_gap(geom, tol)); });
      run("michael_simon", [&] { return to_json(identities::michael_simon_ratio(geom, tol)); });
      run("maclaurin", [&] { return to_json(identities::maclaurin_check(geom, n, tol)); });
      if (delta == 0.0) {
        const auto one = aniso::constant_anisotropy(1.0);
        for (int r = 0; r <= n - 1; ++r)
          run("aniso_minkowski_r" + std::to_string(r),
              [&] { return to_json(aniso::aniso_minkowski_residual(geom, *one, r, tol)); });
        run("aniso_heintze_karcher",
            [&] { return to_json(aniso::aniso_hk_gap(geom, *one, tol)); });
      }

      try {
        const auto spec =
            spec_from_config(cfg, delta, cfg.get_real("surface.rho", 1.0), n);
        const auto fit = weingarten::fit_coefficients(geom, spec.r);
        json jw;
        jw["fit"] = {{"a", fit.a}, {"b", fit.b}, {"residual", fit.residual},
                     {"clipped", fit.clipped}};
        const auto probe = weingarten::rigidity_probe(geom, spec, tol);
        jw["rigidity_probe"] = {{"triggered", probe.triggered},
                                {"pass", probe.pass},
                                {"eps_sup", probe.eps_sup},
                                {"max_defect", probe.max_defect},
                                {"fit_residual", probe.fit_residual},
                                {"eta", probe.eta}};
        if (!probe.pass) all_pass = false;
        rep.body["weingarten"] = jw;
      } catch (const std::exception& e) {
        rep.body["weingarten"] = {{"error", e.what()}};
      }
    } else {
      run("conditions", [&] {
        const auto cond = ambient::check_warping_conditions(*geom.surface().warped, 128);
        json j;
        j["name"] = "warping_conditions";
        j["checks"] = to_json(cond);
        j["verdict"] = cond.all_pass();
        return j;
      });
      run("minkowski_r1", [&] { return to_json(identities::minkowski_residual(geom, 1, tol)); });
      for (int r = 1; r <= n; ++r)
        run("generalized_minkowski_r" + std::to_string(r),
            [&] { return to_json(identities::generalized_minkowski_gap(geom, r, tol)); });
      run("heintze_karcher", [&] { return to_json(identities::heintze_karcher_gap(geom, tol)); });
      run("divergence", [&] { return to_json(identities::divergence_identity(geom, tol)); });
      run("maclaurin", [&] { return to_json(identities::maclaurin_check(geom, n, tol)); });
    }

    const auto sum = geom.summary();
    rep.body["summary"] = {{"area", sum.area},
                           {"enclosed_volume", sum.enclosed_volume},
                           {"extrinsic_radius", sum.extrinsic_radius},
                           {"b_sup_norm", sum.b_sup_norm},
                           {"starshape_margin", geom.starshape_margin()}};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    rep.body["error"] = e.what();
    all_pass = false;
  }
  rep.body["checks"] = checks;
  rep.body["all_pass"] = all_pass;
  rep.exit_code = all_pass ? 0 : 1;
  return rep;
}

Report cmd_sweep(const RunConfig& cfg) {
  Report rep;
  rep.body["command"] = "sweep";
  rep.body["config"] = config_echo(cfg);
  try {
    const int n = static_cast<int>(cfg.get_int("grid.n", 2));
    const double delta = cfg.get_real("ambient.delta", 0.0);
    const double rho = cfg.get_real("surface.rho", 1.0);
    const auto spec = spec_from_config(cfg, delta, rho, n);
    const auto family = build_family(cfg);
    const std::vector<double> t_values =
        cfg.get_list("sweep.t_values", {1e-1, 1e-2, 1e-3, 1e-4});

    const auto sweep = weingarten::stability_sweep(family, spec, t_values);

    const auto cn = symfun::estimate_cn(
        n, spec.r, cfg.get_int("cn.samples", 200000),
        static_cast<std::uint64_t>(cfg.get_int("cn.seed", 42)), cfg.get_real("cn.safety", 0.9));

    json recs = json::array();
    json chains = json::array();
    bool chains_ok = true;
    std::ostringstream csv;
    csv << "t,eps_l1,dH,rho0\n";
    for (const auto& r : sweep.records) {
      recs.push_back({{"t", r.t},
                      {"eps_l1", r.eps_l1},
                      {"eps_l2", r.eps_l2},
                      {"dH", r.hausdorff},
                      {"rho0", r.rho0}});
      csv << format_csv_value(r.t) << ',' << format_csv_value(r.eps_l1) << ','
          << format_csv_value(r.hausdorff) << ',' << format_csv_value(r.rho0) << '\n';
      try {
        const auto chain = weingarten::stability_chain(family(r.t), spec, cn);
        json jc = to_json(chain);
        jc["t"] = r.t;
        jc["final_slack"] = chain.final_rhs - chain.final_lhs;
        chains_ok = chains_ok && chain.chain_ok;
        chains.push_back(jc);
      } catch (const std::exception& e) {
        chains.push_back(failed_check("chain_t" + std::to_string(r.t), e.what()));
        chains_ok = false;
      }
    }
    rep.csv = csv.str();
    rep.csv_name = "sweep.csv";

    bool bound_holds = true;
    for (const auto& r : sweep.records) {
      if (r.eps_l1 > 0.0 &&
          r.hausdorff > sweep.c_cert * std::pow(r.eps_l1, sweep.gamma_cert) * (1.0 + 1e-9))
        bound_holds = false;
    }

    rep.body["records"] = recs;
    rep.body["chains"] = chains;
    rep.body["spec"] = {{"r", spec.r}, {"a", spec.a}, {"b", spec.b}};
    rep.body["cn"] = {{"raw_infimum", cn.raw_infimum},
                      {"safety", cn.safety},
                      {"value", cn.value()},
                      {"samples", cn.sample_count},
                      {"seed", cn.seed}};
    rep.body["gamma_hat"] = sweep.gamma_hat;
    rep.body["C_hat"] = sweep.c_lsq;
    rep.body["gamma_cert"] = sweep.gamma_cert;
    rep.body["C_cert"] = sweep.c_cert;
    rep.body["monotone"] = sweep.monotone;
    rep.body["bound_holds"] = bound_holds;
    const bool ok = sweep.monotone && sweep.gamma_hat > 0.0 && bound_holds && chains_ok;
    rep.body["all_pass"] = ok;
    rep.exit_code = ok ? 0 : 1;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    rep.body["error"] = e.what();
    rep.body["all_pass"] = false;
    rep.exit_code = 1;
  }
  return rep;
}

Report cmd_aniso(const RunConfig& cfg) {
  Report rep;
  rep.body["command"] = "aniso";
  rep.body["config"] = config_echo(cfg);
  try {
    const int n = static_cast<int>(cfg.get_int("grid.n", 2));
    const int degree = static_cast<int>(cfg.get_int("grid.degree", 20));
    const double tol = cfg.get_real("check.tol", 1e-6);
    const auto F = build_anisotropy(cfg);
    const auto grid = hs::build_grid(n, degree);

    const double margin = aniso::convexity_margin(*F, grid);
    rep.body["convexity_margin"] = margin;
    if (!(margin > 0.0)) {
      rep.body["error"] = "anisotropy rejected: convexity margin not positive";
      rep.body["all_pass"] = false;
      rep.exit_code = 1;
      return rep;
    }

    bool all_pass = true;
    json checks = json::array();
    auto run = [&](const std::string& name, const std::function<json()>& fn) {
      try {
        json j = fn();
        if (j.contains("verdict") && !j["verdict"].get<bool>()) all_pass = false;
        checks.push_back(j);
      } catch (const std::exception& e) {
        checks.push_back(failed_check(name, e.what()));
        all_pass = false;
      }
    };

    // the Wulff shape of F, on the same grid
    hs::FieldPtr wr = F->wulff_radius();
    hs::SurfaceGeometry wulff(
        hs::make_space_form_surface(ambient::SpaceForm{n + 1, 0.0}, wr), grid);
    {
      const auto frames = aniso::aniso_frames(wulff, *F);
      double kmin = frames[0].kappaF.values.minCoeff(), kmax = kmin;
      for (const auto& fr : frames) {
        kmin = std::min(kmin, fr.kappaF.values.minCoeff());
        kmax = std::max(kmax, fr.kappaF.values.maxCoeff());
      }
      json j;
      j["name"] = "wulff_kappa_variation";
      j["kappa_min"] = kmin;
      j["kappa_max"] = kmax;
      j["variation"] = kmax - kmin;
      j["verdict"] = std::abs(kmax - kmin) <= tol * std::max(std::abs(kmax), 1.0);
      if (!j["verdict"].get<bool>()) all_pass = false;
      checks.push_back(j);
    }
    for (int r = 0; r <= n - 1; ++r)
      run("aniso_minkowski_r" + std::to_string(r),
          [&] { return to_json(aniso::aniso_minkowski_residual(wulff, *F, r, tol)); });
    run("aniso_heintze_karcher", [&] { return to_json(aniso::aniso_hk_gap(wulff, *F, tol)); });

    // perturbed-Wulff sweep
    const std::vector<double> t_values =
        cfg.get_list("aniso.t_values", {3e-2, 1e-2, 3e-3, 1e-3});
    weingarten::WeingartenSpec spec;
    spec.r = static_cast<int>(cfg.get_int("aniso.r", std::min(2, n)));
    spec.a = cfg.get_real("aniso.a", 0.0);
    spec.b = cfg.get_real("aniso.b", 1.0);  // Wulff shapes have kappa_F = 1
    const auto poly = parse_polynomial(cfg.get_string("aniso.harmonic", "x1*x2*x3"), n + 1);
    weingarten::SurfaceFamily family = [wr, poly, grid, n](double t) {
      auto pert = hs::polynomial_field(poly);
      class Scaled : public hs::ScalarField {
       public:
        Scaled(hs::FieldPtr base, hs::FieldPtr p, double t) : base_(base), p_(p), t_(t) {}
        D2 eval(const Eigen::VectorXd& x) const override {
          return base_->eval(x) * (1.0 + p_->eval(x) * t_);
        }

       private:
        hs::FieldPtr base_, p_;
        double t_;
      };
      auto field = std::make_shared<Scaled>(wr, pert, t);
      return hs::SurfaceGeometry(
          hs::make_space_form_surface(ambient::SpaceForm{n + 1, 0.0}, field), grid);
    };
    const auto sweep = aniso::aniso_stability_sweep(family, *F, spec, t_values);
    json recs = json::array();
    std::ostringstream csv;
    csv << "t,eps_l2,w22_norm,rho\n";
    for (const auto& r : sweep.records) {
      recs.push_back({{"t", r.t},
                      {"eps_l1", r.eps_l1},
                      {"eps_l2", r.eps_l2},
                      {"w22", r.w22},
                      {"rho", r.rho_scale},
                      {"ratio", r.ratio},
                      {"tau_probe", r.tau_probe}});
      csv << format_csv_value(r.t) << ',' << format_csv_value(r.eps_l2) << ','
          << format_csv_value(r.w22) << ',' << format_csv_value(r.rho_scale) << '\n';
    }
    rep.csv = csv.str();
    rep.csv_name = "sweep.csv";
    rep.body["sweep"] = {{"records", recs},
                         {"k_hat", sweep.k_hat},
                         {"gamma_hat", sweep.gamma_hat},
                         {"co_vanish", sweep.co_vanish}};
    // small-defect hypothesis probe: p = 2 needs no threshold for p <= n
    rep.body["tau_probe"] = {{"p", 2},
                             {"delta0", cfg.get_real("aniso.tau_delta0", 0.1)},
                             {"threshold_needed", 2 > n},
                             {"values_max",
                              sweep.records.empty()
                                  ? 0.0
                                  : std::max_element(sweep.records.begin(), sweep.records.end(),
                                                     [](const auto& a, const auto& b) {
                                                       return a.tau_probe < b.tau_probe;
                                                     })
                                        ->tau_probe}};
    if (!sweep.co_vanish) all_pass = false;
    rep.body["checks"] = checks;
    rep.body["all_pass"] = all_pass;
    rep.exit_code = all_pass ? 0 : 1;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    rep.body["error"] = e.what();
    rep.body["all_pass"] = false;
    rep.exit_code = 1;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// output

std::uint64_t content_hash(const json& body) {
  json copy = body;
  if (copy.contains("meta")) copy["meta"].erase("timestamp");
  const std::string dump = copy.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_csv_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_report(Report& rep, const std::string& dir) {
  std::filesystem::create_directories(dir);
  rep.body["meta"]["version"] = "0.1.0";
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(content_hash(rep.body)));
  rep.body["meta"]["content_hash"] = hex;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%FT%TZ", std::gmtime(&now));
  rep.body["meta"]["timestamp"] = stamp;

  std::ofstream out(std::filesystem::path(dir) / "report.json");
  out << rep.body.dump(2) << '\n';
  if (!rep.csv.empty()) {
    std::ofstream csv(std::filesystem::path(dir) /
                      (rep.csv_name.empty() ? "sweep.csv" : rep.csv_name));
    csv << rep.csv;
  }
}

}  // namespace curvlab::report

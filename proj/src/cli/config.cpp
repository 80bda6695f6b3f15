#include "dsrig/cli/config.hpp"

#include "dsrig/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace dsrig::cli {

namespace pt = boost::property_tree;

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double to_double(const std::string& where, const std::string& text) {
  std::istringstream is(text);
  double v = 0.0;
  is >> v;
  std::string rest;
  if (is.fail() || (is >> rest) || !std::isfinite(v)) throw ConfigError(where + ": expected a number, got '" + text + "'");
  return v;
}

int to_int(const std::string& where, const std::string& text) {
  const double v = to_double(where, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(where + ": expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

void check_keys(const std::string& section, const pt::ptree& tree, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : tree) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    (void)value;
  }
}

SurfaceSpec parse_surface(const std::string& section, const pt::ptree& t) {
  check_keys(section, t, {"kind", "rho0", "epsilon", "l", "m", "terms", "backend", "grid"});
  SurfaceSpec s;
  s.kind = t.get<std::string>("kind", "slice");
  const auto num = [&](const std::string& key, double fallback) {
    const auto v = t.get_optional<std::string>(key);
    return v ? to_double(section + "." + key, *v) : fallback;
  };
  s.descriptor.rho0 = num("rho0", 0.0);
  if (s.kind == "slice") {
    // nothing else
  } else if (s.kind == "perturbed_slice") {
    s.descriptor.terms.push_back({num("epsilon", 0.0), static_cast<int>(num("l", 0)), static_cast<int>(num("m", 0))});
  } else if (s.kind == "harmonic_sum") {
    // terms = eps l m; eps l m; ...
    std::stringstream all(t.get<std::string>("terms", ""));
    std::string item;
    while (std::getline(all, item, ';')) {
      std::istringstream is(item);
      HarmonicTerm term;
      if (!(is >> term.epsilon >> term.l >> term.m)) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        throw ConfigError(section + ".terms: expected 'epsilon l m', got '" + item + "'");
      }
      s.descriptor.terms.push_back(term);
    }
  } else {
    throw ConfigError(section + ".kind: unknown surface kind '" + s.kind + "'");
  }
  for (const auto& term : s.descriptor.terms) {
    if (term.l < 0 || std::abs(term.m) > term.l) throw ConfigError(section + ": harmonic mode needs 0 <= |m| <= l");
  }
  const std::string backend = t.get<std::string>("backend", "analytic");
  if (backend == "sampled") {
    s.sampled_grid = parse_grid(t.get<std::string>("grid", "128x256"));
  } else if (backend != "analytic") {
    throw ConfigError(section + ".backend: expected analytic or sampled, got '" + backend + "'");
  }
  return s;
}

Eigen::Vector3d parse_axis(const std::string& text) {
  std::istringstream is(text);
  Eigen::Vector3d a;
  std::string rest;
  if (!(is >> a(0) >> a(1) >> a(2)) || (is >> rest)) throw ConfigError("isometry.axis: expected three numbers");
  if (a.norm() < 1e-12) throw ConfigError("isometry.axis must be nonzero");
  return a.normalized();
}

IsometrySpec parse_isometry(const pt::ptree& t) {
  check_keys("isometry", t, {"kind", "rapidity", "angle", "axis"});
  IsometrySpec s;
  s.kind = t.get<std::string>("kind", "identity");
  if (auto v = t.get_optional<std::string>("rapidity")) s.rapidity = to_double("isometry.rapidity", *v);
  if (auto v = t.get_optional<std::string>("angle")) s.angle = to_double("isometry.angle", *v);
  if (auto v = t.get_optional<std::string>("axis")) s.axis = parse_axis(*v);
  if (s.kind != "identity" && s.kind != "rotation" && s.kind != "boost" && s.kind != "reflect_equator") {
    throw ConfigError("isometry.kind: unknown kind '" + s.kind + "'");
  }
  if (std::abs(s.rapidity) > kMaxRapidity) throw ConfigError("isometry.rapidity must satisfy |rapidity| <= 1");
  return s;
}

}  // namespace

GraphSurface SurfaceSpec::build() const {
  GraphSurface s = GraphSurface::analytic(descriptor);
  if (sampled_grid) return GraphSurface::sampled(s.sample(sampled_grid->first, sampled_grid->second));
  return s;
}

AmbientIsometry IsometrySpec::build() const {
  if (kind == "rotation") return AmbientIsometry::rotation(angle, axis);
  if (kind == "boost") return AmbientIsometry::boost(rapidity, axis);
  if (kind == "reflect_equator") return AmbientIsometry::reflect_equator();
  return AmbientIsometry::identity();
}

Tolerances::Tolerances()
    : values_{{"normal", 1e-10},       {"frame", 1e-9},        {"pre_integral", 1e-8},
              {"sigma2_curvature", 1e-6}, {"newton", 1e-6},     {"deriv_v", 1e-10},
              {"reflection", 1e-8},    {"identity", 1e-6},     {"pointwise", 1e-8},
              {"tilde", 1e-6},         {"metric", 1e-8},       {"rigidity_integral", 1e-8},
              {"w_mismatch", 1e-6}} {}

double Tolerances::get(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw ConfigError("unknown tolerance '" + name + "'");
  return it->second;
}

void Tolerances::set(const std::string& name, double value) {
  const auto it = values_.find(name);
  if (it == values_.end()) throw ConfigError("unknown tolerance '" + name + "'");
  if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError("tolerance '" + name + "' must be positive");
  it->second = value;
}

const std::vector<std::string>& geometry_checks() {
  static const std::vector<std::string> names{"normal",  "frame",      "pre_integral", "sigma2_curvature",
                                              "newton",  "deriv_v",    "reflection",   "gate"};
  return names;
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ParseError("expected NxM, got '" + text + "'");
  try {
    std::size_t a = 0, b = 0;
    const int n = std::stoi(text.substr(0, x), &a);
    const int m = std::stoi(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1) throw ParseError("expected NxM, got '" + text + "'");
    return {n, m};
  } catch (const std::logic_error&) {
    throw ParseError("expected NxM, got '" + text + "'");
  }
}

void ExperimentConfig::require_single_surface() const {
  if (!surface) throw ConfigError("a [surface] section is required");
  if (surface_tilde || isometry) throw ConfigError("single-surface commands take exactly one surface and no isometry");
  if (n_theta < kMinQuadrature || n_phi < kMinQuadrature) throw ConfigError("quadrature degrees must be >= 16");
}

void ExperimentConfig::require_pair() const {
  if (!surface) throw ConfigError("a [surface] section is required");
  if (n_theta < kMinQuadrature || n_phi < kMinQuadrature) throw ConfigError("quadrature degrees must be >= 16");
  if (pair_mode == "ambient") {
    if (!isometry) throw ConfigError("pair.mode = ambient needs an [isometry] section");
    if (surface_tilde) throw ConfigError("pair.mode = ambient derives the second surface; drop [surface_tilde]");
  } else if (pair_mode == "chart_identity") {
    if (!surface_tilde) throw ConfigError("pair.mode = chart_identity needs a [surface_tilde] section");
    if (isometry) throw ConfigError("pair.mode = chart_identity takes no [isometry]");
  } else {
    throw ConfigError("pair.mode: expected ambient or chart_identity, got '" + pair_mode + "'");
  }
}

IsometricPair ExperimentConfig::build_pair() const {
  require_pair();
  const GraphSurface m = surface->build();
  if (pair_mode == "ambient") return IsometricPair::ambient(m, isometry->build());
  return IsometricPair::chart_identity(m, surface_tilde->build());
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  const auto surf = [&](const std::string& prefix, const SurfaceSpec& s) {
    out.emplace_back(prefix + ".kind", s.kind);
    out.emplace_back(prefix + ".rho0", format_double(s.descriptor.rho0));
    std::ostringstream terms;
    for (std::size_t k = 0; k < s.descriptor.terms.size(); ++k) {
      const auto& t = s.descriptor.terms[k];
      terms << (k ? "; " : "") << format_double(t.epsilon) << ' ' << t.l << ' ' << t.m;
    }
    out.emplace_back(prefix + ".terms", terms.str());
    out.emplace_back(prefix + ".backend",
                     s.sampled_grid ? "sampled " + std::to_string(s.sampled_grid->first) + "x" +
                                          std::to_string(s.sampled_grid->second)
                                    : std::string("analytic"));
  };
  if (surface) surf("surface", *surface);
  if (surface_tilde) surf("surface_tilde", *surface_tilde);
  if (isometry) {
    out.emplace_back("isometry.kind", isometry->kind);
    out.emplace_back("isometry.rapidity", format_double(isometry->rapidity));
    out.emplace_back("isometry.angle", format_double(isometry->angle));
    std::ostringstream axis;
    axis << format_double(isometry->axis(0)) << ' ' << format_double(isometry->axis(1)) << ' '
         << format_double(isometry->axis(2));
    out.emplace_back("isometry.axis", axis.str());
  }
  out.emplace_back("pair.mode", pair_mode);
  out.emplace_back("quadrature", std::to_string(n_theta) + "x" + std::to_string(n_phi));
  for (const auto& [k, v] : tolerances.all()) out.emplace_back("tolerance." + k, format_double(v));
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside any section");
    if (section == "surface") {
      c.surface = parse_surface(section, body);
    } else if (section == "surface_tilde") {
      c.surface_tilde = parse_surface(section, body);
    } else if (section == "isometry") {
      c.isometry = parse_isometry(body);
    } else if (section == "pair") {
      check_keys(section, body, {"mode"});
      c.pair_mode = body.get<std::string>("mode", "ambient");
    } else if (section == "quadrature") {
      check_keys(section, body, {"n_theta", "n_phi"});
      if (auto v = body.get_optional<std::string>("n_theta")) c.n_theta = to_int("quadrature.n_theta", *v);
      if (auto v = body.get_optional<std::string>("n_phi")) c.n_phi = to_int("quadrature.n_phi", *v);
    } else if (section == "tolerances") {
      for (const auto& [name, value] : body) c.tolerances.set(name, to_double("tolerances." + name, value.data()));
    } else if (section == "suite") {
      check_keys(section, body, {"checks", "seed"});
      if (auto v = body.get_optional<std::string>("seed")) c.seed = static_cast<unsigned>(to_int("suite.seed", *v));
      std::stringstream list(body.get<std::string>("checks", ""));
      std::string item;
      while (std::getline(list, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty() || item == "all") continue;
        bool known = false;
        for (const auto& n : geometry_checks()) known = known || n == item;
        if (!known) throw ConfigError("suite.checks: unknown check '" + item + "'");
        c.suite.insert(item);
      }
    } else {
      throw ConfigError("unknown section [" + section + "]");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace dsrig::cli

#include "aklab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aklab/linalg.hpp"
#include "aklab/operators.hpp"

namespace aklab {

using nlohmann::json;

namespace {

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items())
    if (!allowed.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  const std::string path = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(path + ": expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
    if (std::is_unsigned_v<T> && v.get<long long>() < 0) throw ConfigError(path + ": must be non-negative");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError(path + ": expected a number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(path + ": expected a string");
  } else {
    if (!v.is_array()) throw ConfigError(path + ": expected an array");
    for (const auto& e : v)
      if (!e.is_number()) throw ConfigError(path + ": expected numeric entries");
  }
  out = v.get<T>();
}

TangentSpec parse_tangent(const json& obj, const std::string& where) {
  allow_keys(obj, where, {"kind", "k", "phase", "amplitude", "cutoff", "seed_offset"});
  TangentSpec t;
  std::string kind = "jp_mode", phase = "sin";
  read(obj, "kind", kind, where);
  read(obj, "phase", phase, where);
  read(obj, "k", t.k, where);
  read(obj, "amplitude", t.amplitude, where);
  read(obj, "cutoff", t.cutoff, where);
  read(obj, "seed_offset", t.seed_offset, where);
  if (kind == "jp_mode") t.kind = TangentSpec::Kind::JPMode;
  else if (kind == "p_mode") t.kind = TangentSpec::Kind::PMode;
  else if (kind == "random") t.kind = TangentSpec::Kind::Random;
  else throw ConfigError(where + ".kind: expected jp_mode, p_mode or random");
  if (phase != "sin" && phase != "cos") throw ConfigError(where + ".phase: expected sin or cos");
  t.sine = phase == "sin";
  return t;
}

json tangent_json(const TangentSpec& t) {
  const char* kind = t.kind == TangentSpec::Kind::JPMode ? "jp_mode" : t.kind == TangentSpec::Kind::PMode ? "p_mode"
                                                                                                          : "random";
  return json{{"kind", kind}, {"k", t.k}, {"phase", t.sine ? "sin" : "cos"}, {"amplitude", t.amplitude},
              {"cutoff", t.cutoff}, {"seed_offset", t.seed_offset}};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  allow_keys(root, "config",
             {"grid", "seed", "potential", "tolerances", "verify", "flow", "fd_steps", "probes", "geodesic", "symbol",
              "output"});
  RunConfig c;
  read(root, "seed", c.seed, "config");
  read(root, "fd_steps", c.fd_steps, "config");
  if (root.contains("grid")) {
    const json& g = root["grid"];
    allow_keys(g, "grid", {"m", "n"});
    read(g, "m", c.m, "grid");
    read(g, "n", c.n, "grid");
  }
  if (root.contains("potential")) {
    const json& p = root["potential"];
    allow_keys(p, "potential", {"kind", "modes", "cutoff", "amplitude"});
    std::string kind = "flat";
    read(p, "kind", kind, "potential");
    if (kind == "flat") {
      c.potential.kind = PotentialSpec::Kind::Flat;
    } else if (kind == "modes") {
      c.potential.kind = PotentialSpec::Kind::Modes;
      if (!p.contains("modes") || !p["modes"].is_array()) throw ConfigError("potential.modes: expected an array");
      for (const auto& mode : p["modes"]) {
        allow_keys(mode, "potential.modes[]", {"k", "basis", "cos", "sin"});
        PotentialMode pm;
        read(mode, "k", pm.k, "potential.modes[]");
        read(mode, "basis", pm.basis, "potential.modes[]");
        read(mode, "cos", pm.cos_amp, "potential.modes[]");
        read(mode, "sin", pm.sin_amp, "potential.modes[]");
        c.potential.modes.push_back(pm);
      }
    } else if (kind == "random") {
      c.potential.kind = PotentialSpec::Kind::Random;
      read(p, "cutoff", c.potential.cutoff, "potential");
      read(p, "amplitude", c.potential.amplitude, "potential");
    } else {
      throw ConfigError("potential.kind: expected flat, modes or random");
    }
  }
  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    allow_keys(t, "tolerances",
               {"battery", "adjoint", "mohsen", "lichnerowicz", "salamon", "anti_self_adjoint", "hessian", "symbol",
                "homogeneity", "parabolicity", "structure", "geodesic", "monotone"});
    auto& tol = c.tolerances;
    read(t, "battery", tol.battery, "tolerances");
    read(t, "adjoint", tol.adjoint, "tolerances");
    read(t, "mohsen", tol.mohsen, "tolerances");
    read(t, "lichnerowicz", tol.lichnerowicz, "tolerances");
    read(t, "salamon", tol.salamon, "tolerances");
    read(t, "anti_self_adjoint", tol.anti_self_adjoint, "tolerances");
    read(t, "hessian", tol.hessian, "tolerances");
    read(t, "symbol", tol.symbol, "tolerances");
    read(t, "homogeneity", tol.homogeneity, "tolerances");
    read(t, "parabolicity", tol.parabolicity, "tolerances");
    read(t, "structure", tol.structure, "tolerances");
    read(t, "geodesic", tol.geodesic, "tolerances");
    read(t, "monotone", tol.monotone, "tolerances");
  }
  if (root.contains("verify")) {
    allow_keys(root["verify"], "verify", {"input_cutoff", "pairs"});
    read(root["verify"], "input_cutoff", c.input_cutoff, "verify");
    read(root["verify"], "pairs", c.pairs, "verify");
  }
  if (root.contains("flow")) {
    allow_keys(root["flow"], "flow", {"dt", "steps", "c_cfl"});
    read(root["flow"], "dt", c.dt, "flow");
    read(root["flow"], "steps", c.steps, "flow");
    read(root["flow"], "c_cfl", c.c_cfl, "flow");
  }
  if (root.contains("probes")) {
    allow_keys(root["probes"], "probes", {"u", "v"});
    if (root["probes"].contains("u")) c.u = parse_tangent(root["probes"]["u"], "probes.u");
    if (root["probes"].contains("v")) c.v = parse_tangent(root["probes"]["v"], "probes.v");
  }
  if (root.contains("geodesic")) {
    allow_keys(root["geodesic"], "geodesic", {"T", "dt"});
    read(root["geodesic"], "T", c.geodesic_T, "geodesic");
    read(root["geodesic"], "dt", c.geodesic_dt, "geodesic");
  }
  if (root.contains("symbol")) {
    allow_keys(root["symbol"], "symbol", {"k", "samples"});
    read(root["symbol"], "k", c.symbol_k, "symbol");
    read(root["symbol"], "samples", c.symbol_samples, "symbol");
  }
  if (root.contains("output")) {
    allow_keys(root["output"], "output", {"dir", "report", "trace"});
    read(root["output"], "dir", c.out_dir, "output");
    read(root["output"], "report", c.report_file, "output");
    read(root["output"], "trace", c.trace_file, "output");
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const RunConfig& c) {
  if (c.m != 1 && c.m != 2) throw ConfigError("grid.m must be 1 or 2");
  if (c.n < 8 || c.n % 2 != 0) throw ConfigError("grid.n must be even and at least 8");
  const int dim = 2 * c.m;
  const int max_k = c.n / 3;
  const int n_basis = static_cast<int>(sp_basis(c.m).size());
  for (const auto& mode : c.potential.modes) {
    if (static_cast<int>(mode.k.size()) != dim) throw ConfigError("potential.modes[].k must have 2m entries");
    for (int k : mode.k)
      if (std::abs(k) > max_k) throw ConfigError("potential mode cutoff exceeds n/3");
    if (mode.basis < 0 || mode.basis >= n_basis) throw ConfigError("potential.modes[].basis out of range");
  }
  if (c.potential.kind == PotentialSpec::Kind::Random) {
    if (c.potential.cutoff < 0 || c.potential.cutoff > max_k) throw ConfigError("potential.cutoff must be in [0, n/3]");
    if (!(c.potential.amplitude >= 0.0)) throw ConfigError("potential.amplitude must be non-negative");
  }
  if (c.dt < 0.0) throw ConfigError("flow.dt must be positive (0 selects the default)");
  if (c.steps < 0) throw ConfigError("flow.steps must be non-negative");
  if (c.c_cfl < 0.0) throw ConfigError("flow.c_cfl must be positive (0 selects the default)");
  if (c.fd_steps.empty()) throw ConfigError("fd_steps must not be empty");
  for (double h : c.fd_steps)
    if (!(h > 0.0)) throw ConfigError("fd_steps entries must be positive");
  if (c.input_cutoff < 0 || c.input_cutoff > max_k) throw ConfigError("verify.input_cutoff must be in [0, n/3]");
  if (c.pairs < 1) throw ConfigError("verify.pairs must be at least 1");
  for (const TangentSpec* t : {&c.u, &c.v}) {
    if (!t->k.empty() && static_cast<int>(t->k.size()) != dim) throw ConfigError("probes k must have 2m entries");
    for (int k : t->k)
      if (std::abs(k) > max_k) throw ConfigError("probe mode exceeds n/3");
    if (t->cutoff < 0 || t->cutoff > max_k) throw ConfigError("probe cutoff must be in [0, n/3]");
  }
  if (!(c.geodesic_T >= 0.0) || !(c.geodesic_dt > 0.0)) throw ConfigError("geodesic needs T >= 0 and dt > 0");
  if (static_cast<int>(c.symbol_k.size()) != dim) throw ConfigError("symbol.k must have 2m entries");
  for (int k : c.symbol_k)
    if (2 * std::abs(k) >= c.n) throw ConfigError("symbol.k not resolved on the grid");
  if (c.symbol_samples < 1) throw ConfigError("symbol.samples must be at least 1");
}

std::string config_to_json(const RunConfig& c) {
  json potential;
  switch (c.potential.kind) {
    case PotentialSpec::Kind::Flat:
      potential = {{"kind", "flat"}};
      break;
    case PotentialSpec::Kind::Modes: {
      json modes = json::array();
      for (const auto& m : c.potential.modes)
        modes.push_back({{"k", m.k}, {"basis", m.basis}, {"cos", m.cos_amp}, {"sin", m.sin_amp}});
      potential = {{"kind", "modes"}, {"modes", modes}};
      break;
    }
    case PotentialSpec::Kind::Random:
      potential = {{"kind", "random"}, {"cutoff", c.potential.cutoff}, {"amplitude", c.potential.amplitude}};
      break;
  }
  const auto& t = c.tolerances;
  json out = {
      {"grid", {{"m", c.m}, {"n", c.n}}},
      {"seed", c.seed},
      {"potential", potential},
      {"tolerances",
       {{"battery", t.battery}, {"adjoint", t.adjoint}, {"mohsen", t.mohsen}, {"lichnerowicz", t.lichnerowicz},
        {"salamon", t.salamon}, {"anti_self_adjoint", t.anti_self_adjoint}, {"hessian", t.hessian},
        {"symbol", t.symbol}, {"homogeneity", t.homogeneity}, {"parabolicity", t.parabolicity},
        {"structure", t.structure}, {"geodesic", t.geodesic}, {"monotone", t.monotone}}},
      {"verify", {{"input_cutoff", c.input_cutoff}, {"pairs", c.pairs}}},
      {"flow", {{"dt", c.dt}, {"steps", c.steps}, {"c_cfl", c.c_cfl}}},
      {"fd_steps", c.fd_steps},
      {"probes", {{"u", tangent_json(c.u)}, {"v", tangent_json(c.v)}}},
      {"geodesic", {{"T", c.geodesic_T}, {"dt", c.geodesic_dt}}},
      {"symbol", {{"k", c.symbol_k}, {"samples", c.symbol_samples}}},
      {"output", {{"dir", c.out_dir}, {"report", c.report_file}, {"trace", c.trace_file}}},
  };
  return out.dump(2);
}

AKStructure build_structure(const RunConfig& c) {
  const PeriodicGrid grid(c.m, c.n);
  switch (c.potential.kind) {
    case PotentialSpec::Kind::Modes:
      return make_structure(SpPotential::from_modes(grid, c.potential.modes));
    case PotentialSpec::Kind::Random:
      return make_structure(SpPotential::random(grid, c.seed, c.potential.cutoff, c.potential.amplitude));
    case PotentialSpec::Kind::Flat:
      break;
  }
  return make_structure(SpPotential::zero(grid));
}

TangentField build_tangent(const RunConfig& c, const TangentSpec& spec, const AKStructure& J) {
  const PeriodicGrid& grid = J.grid();
  if (spec.kind == TangentSpec::Kind::Random) {
    const SpPotential a = SpPotential::random(grid, c.seed + 1000 + spec.seed_offset, spec.cutoff, spec.amplitude);
    return TangentField(J, commutator(J.J(), a.field()));
  }
  std::vector<int> k = spec.k;
  if (k.empty()) {
    k.assign(grid.dim(), 0);
    k[0] = 1;
  }
  const TensorField f = scalar_field(grid, [&](const Vec& x) {
    double t = 0.0;
    for (int a = 0; a < grid.dim(); ++a) t += k[a] * x[a];
    return spec.amplitude * (spec.sine ? std::sin(t) : std::cos(t));
  });
  return spec.kind == TangentSpec::Kind::PMode ? P(f, J) : JP(f, J);
}

}  // namespace aklab

#include "aklab/commands.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "aklab/dynamics.hpp"
#include "aklab/identities.hpp"
#include "aklab/linalg.hpp"
#include "aklab/spectral.hpp"
#include "aklab/symbol.hpp"

namespace aklab {

std::string artifact_version() { return AKLAB_VERSION; }

namespace {

using Add = std::function<void(OperatorReport)>;

std::string out_path(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

Add collector(VerificationReport& rep, std::ostream* log) {
  return [&rep, log](OperatorReport r) {
    if (log)
      *log << (r.pass ? "pass  " : "FAIL  ") << r.name << "  " << (r.relative_test ? "rel " : "abs ")
           << fmt(r.relative_test ? r.relative : r.absolute) << " (tol " << fmt(r.tolerance) << ")\n";
    rep.entries.push_back(std::move(r));
  };
}

VerificationReport new_report(const RunConfig& c) {
  VerificationReport rep;
  rep.version = artifact_version();
  rep.config_json = config_to_json(c);
  return rep;
}

TangentField random_tangent(const AKStructure& J, std::uint64_t seed, int cutoff) {
  return TangentField(J, commutator(J.J(), SpPotential::random(J.grid(), seed, cutoff, 1.0).field()));
}

// Tracks the worst (absolute, reference) pair by relative size.
struct Worst {
  double absolute = 0.0;
  double reference = 0.0;
  double relative = -1.0;
  void add(double a, double r) {
    const double rel = a / std::max(r, kRelativeFloor);
    if (rel > relative) absolute = a, reference = r, relative = rel;
  }
};

double scalar_norm(const TensorField& f, const AKStructure& J) { return norm(f, J); }

void adjointness_checks(const RunConfig& c, const Geometry& G, const Add& add) {
  const AKStructure& J = G.structure;
  Worst p, jp;
  for (int i = 0; i < c.pairs; ++i) {
    const TensorField f = random_band_limited(J.grid(), c.seed + 100 + i, c.input_cutoff, 1.0);
    const TangentField v = random_tangent(J, c.seed + 200 + i, c.input_cutoff);
    const double nv = norm(v.field(), J);
    const TangentField pf = P(f, J), jpf = JP(f, J);
    p.add(std::abs(inner(pf.field(), v.field(), J) - inner(f, P_star(v, G), J)), norm(pf.field(), J) * nv);
    jp.add(std::abs(inner(jpf.field(), v.field(), J) - inner(f, JP_star(v, G), J)), norm(jpf.field(), J) * nv);
  }
  const std::string note = "worst of " + std::to_string(c.pairs) + " random pairs, relative to |Pf| |v|";
  add(make_report("adjoint_P", p.absolute, p.reference, c.tolerances.adjoint, J.grid(), true, note));
  add(make_report("adjoint_JP", jp.absolute, jp.reference, c.tolerances.adjoint, J.grid(), true, note));
}

void variation_checks(const RunConfig& c, const Geometry& G, const Add& add) {
  const AKStructure& J = G.structure;
  const TangentField v = random_tangent(J, c.seed + 300, c.input_cutoff);
  const TensorField exact = variation_s(v, G);
  const double scale = exact.max_abs();
  const double ts[3] = {4e-3, 2e-3, 1e-3};
  double err[3];
  for (int i = 0; i < 3; ++i) {
    const TensorField sp = make_geometry(retract(J, v, ts[i])).curvature.hermitian_scalar;
    const TensorField sm = make_geometry(retract(J, v, -ts[i])).curvature.hermitian_scalar;
    err[i] = ((1.0 / (2.0 * ts[i])) * (sp - sm) - exact).max_abs();
  }
  add(make_report("first_variation_s", err[2], scale, c.tolerances.mohsen, J.grid(), true,
                  "centered difference of s along retract(J, v, t) at t = 1e-3 against -(JP)^* v"));
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  add(make_report("first_variation_order", std::max(std::abs(r1 - 4.0), std::abs(r2 - 4.0)), 4.0, 0.5, J.grid(), false,
                  "error ratios under t halving " + fmt(r1) + ", " + fmt(r2) + "; second order expects 4"));
}

void operator_checks(const RunConfig& c, const Geometry& G, const Add& add) {
  const AKStructure& J = G.structure;
  const auto& tol = c.tolerances;
  const TensorField f = random_band_limited(J.grid(), c.seed + 400, c.input_cutoff, 1.0);
  const TensorField h = random_band_limited(J.grid(), c.seed + 401, c.input_cutoff, 1.0);

  const TensorField L = lichnerowicz(f, G);
  const TensorField Le = lichnerowicz_explicit(f, G);
  add(make_report("lichnerowicz_explicit", scalar_norm(L - Le, J), scalar_norm(L, J), tol.lichnerowicz, J.grid(), true,
                  "L2 gap to P^*P f; sup |N| = " + fmt(nijenhuis(J).max_abs())));

  const TangentField pf = P(f, J), jph = JP(h, J);
  add(make_report("salamon", std::abs(inner(pf.field(), jph.field(), J) -
                                      0.5 * inner(G.curvature.hermitian_scalar, poisson(f, h, J), J)),
                  norm(pf.field(), J) * norm(jph.field(), J), tol.salamon, J.grid(), true,
                  "<P f, JP h> - <s, {f,h}>/2, relative to |Pf| |JPh|"));

  const TensorField lkf = lie_K_scalar(f, G);
  const TensorField lkf2 = 2.0 * JP_star(pf, G);
  add(make_report("lie_K_scalar", scalar_norm(lkf - lkf2, J),
                  std::max({scalar_norm(lkf, J), scalar_norm(lkf2, J), scalar_norm(L, J)}), tol.salamon, J.grid(), true,
                  "K(f) against 2 (JP)^* P f, L2, relative to the larger of both sides and |P^*P f|"));

  const TensorField lkh = lie_K_scalar(h, G);
  const double nf = scalar_norm(f, J), nh = scalar_norm(h, J);
  add(make_report("lie_K_antisymmetric_scalar", std::abs(inner(lkf, h, J) + inner(f, lkh, J)),
                  nf * nh + scalar_norm(lkf, J) * nh + nf * scalar_norm(lkh, J), tol.anti_self_adjoint, J.grid(), true,
                  "<L_K f, h> + <f, L_K h>"));

  const TangentField u = random_tangent(J, c.seed + 500, c.input_cutoff);
  const TangentField w = random_tangent(J, c.seed + 501, c.input_cutoff);
  const TensorField lku = lie_K_tangent(u.field(), G), lkw = lie_K_tangent(w.field(), G);
  const double nu = norm(u.field(), J), nw = norm(w.field(), J);
  add(make_report("lie_K_antisymmetric_tangent", std::abs(inner(lku, w.field(), J) + inner(u.field(), lkw, J)),
                  nu * nw + norm(lku, J) * nw + nu * norm(lkw, J), tol.anti_self_adjoint, J.grid(), true,
                  "<L_K u, w> + <u, L_K w>"));
}

void hessian_checks(const RunConfig& c, const Geometry& G, const Geometry& flat, const Add& add) {
  const AKStructure& J = G.structure;
  const auto& tol = c.tolerances;
  const TangentField u = build_tangent(c, c.u, J), v = build_tangent(c, c.v, J);
  const double formula = hessian_formula(G, u, v);
  const FdEstimate fd = hessian_fd(J, u, v, c.fd_steps);
  const double scale = std::max({std::abs(formula), std::abs(fd.extrapolated),
                                 norm(JP_star(u, G), J) * norm(JP_star(v, G), J)});
  add(make_report("hessian_fd", std::abs(formula - fd.extrapolated), scale, tol.hessian, J.grid(), true,
                  "formula " + fmt(formula) + " vs Richardson " + fmt(fd.extrapolated) + ", step ratio " +
                      fmt(fd.order_ratio)));

  const AKStructure& F = flat.structure;
  const TangentField uf = build_tangent(c, c.u, F), vf = build_tangent(c, c.v, F);
  const double general = hessian_formula(flat, uf, vf), reduced = hessian_reduced(flat, uf, vf);
  add(make_report("hessian_flat_reduction", std::abs(general - reduced), std::abs(reduced), 1e-10, F.grid(), true,
                  "general assembly " + fmt(general) + " vs 2<(JP)^*u, (JP)^*v> at flat"));

  const TensorField f = random_band_limited(F.grid(), c.seed + 600, c.input_cutoff, 1.0);
  const TangentField pf = P(f, F), w = random_tangent(F, c.seed + 601, c.input_cutoff);
  add(make_report("hessian_flat_orbit", std::abs(hessian_formula(flat, pf, w)),
                  norm(pf.field(), F) * norm(w.field(), F), 1e-8, F.grid(), true, "Hess(P f, w) at flat"));
}

void symbol_checks(const RunConfig& c, const AKStructure& J, const Geometry& flat, const Add& add) {
  const auto& tol = c.tolerances;
  const AKStructure& F = flat.structure;
  const Mat j0 = F.J().matrix(0), g0 = F.g().matrix(0), gi0 = F.g_inv().matrix(0);
  std::mt19937_64 rng(c.seed + 700);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Mat V = Mat::Zero(j0.rows(), j0.cols());
  for (const auto& b : tangent_fiber_basis(j0, g0, gi0)) V += unit(rng) * b;

  const SymbolExtraction ex = extract_symbol(flat, c.symbol_k, V);
  const double gap = std::max({(ex.cos_to_cos - ex.formula).cwiseAbs().maxCoeff(),
                               (ex.sin_to_sin - ex.formula).cwiseAbs().maxCoeff(),
                               ex.cos_to_sin.cwiseAbs().maxCoeff(), ex.sin_to_cos.cwiseAbs().maxCoeff()});
  add(make_report("symbol_extraction", gap, ex.formula.cwiseAbs().maxCoeff(), tol.symbol, F.grid(), true,
                  "2 JP(JP)^* on V cos(k.x), V sin(k.x) at flat against (V,Xi)Xi/2"));

  const Mat kernel = j0 * ex.Xi;
  const SymbolExtraction kx = extract_symbol(flat, c.symbol_k, kernel);
  const double kscale = 0.5 * ex.Xi.squaredNorm() * kernel.norm();
  add(make_report("symbol_kernel", kx.cos_to_cos.norm(), kscale, tol.symbol, F.grid(), true,
                  "extracted action on V = J Xi, relative to |Xi|^2 |V| / 2"));

  Worst hom;
  const PeriodicGrid& grid = J.grid();
  for (int i = 0; i < 100; ++i) {
    const std::size_t p = rng() % grid.size();
    const Mat j = J.J().matrix(p), g = J.g().matrix(p), gi = J.g_inv().matrix(p);
    Vec xi(grid.dim());
    for (int a = 0; a < grid.dim(); ++a) xi[a] = unit(rng);
    Mat v = Mat::Zero(grid.dim(), grid.dim());
    for (const auto& b : tangent_fiber_basis(j, g, gi)) v += unit(rng) * b;
    const double scale = 0.5 + 2.5 * (unit(rng) + 1.0) / 2.0;
    const Mat base = symbol_formula(v, make_xi(j, gi, xi), g, gi);
    const Mat scaled = symbol_formula(v, make_xi(j, gi, (scale * xi).eval()), g, gi);
    hom.add((scaled - std::pow(scale, 4) * base).cwiseAbs().maxCoeff(),
            std::pow(scale, 4) * base.cwiseAbs().maxCoeff());
  }
  add(make_report("symbol_homogeneity", hom.absolute, hom.reference, tol.homogeneity, grid, true,
                  "symbol(c xi) = c^4 symbol(xi) over 100 samples"));
  add(parabolicity_report(J, c.symbol_samples, c.seed + 800, tol.parabolicity).report);
}

Geometry flat_geometry(const RunConfig& c, const Geometry& G) {
  if (c.potential.kind == PotentialSpec::Kind::Flat) return G;
  return make_geometry(make_structure(SpPotential::zero(G.grid())));
}

int finish(const RunConfig& c, const VerificationReport& rep, const std::string& file, std::ostream& log) {
  const std::string path = out_path(c, file);
  write_atomic(path, report_to_json(rep, utc_timestamp()));
  int failed = 0;
  for (const auto& e : rep.entries) failed += !e.pass;
  log << (rep.pass() ? "PASS" : "FAIL") << ": " << rep.entries.size() - failed << "/" << rep.entries.size()
      << " checks, report " << path << "\n";
  return rep.pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

VerificationReport run_verify(const RunConfig& c, std::ostream* log) {
  VerificationReport rep = new_report(c);
  const Add add = collector(rep, log);
  const Geometry G = make_geometry(build_structure(c));
  const AKStructure& J = G.structure;
  rep.calabi = calabi_functional(G);

  const StructureResiduals res = J.residuals();
  add(make_report("structure_square", res.square, 1.0, c.tolerances.structure, J.grid(), false, "max |J^2 + I|"));
  add(make_report("structure_compatibility", res.compatibility, 1.0, c.tolerances.structure, J.grid(), false,
                  "max |J^T W J - W|"));
  for (auto& r : identity_battery(J, G.connection, {c.seed, c.input_cutoff, c.tolerances.battery})) add(r);
  adjointness_checks(c, G, add);
  variation_checks(c, G, add);
  operator_checks(c, G, add);
  const Geometry flat = flat_geometry(c, G);
  hessian_checks(c, G, flat, add);
  symbol_checks(c, J, flat, add);
  return rep;
}

VerificationReport run_geodesic(const RunConfig& c, std::ostream* log) {
  VerificationReport rep = new_report(c);
  const Add add = collector(rep, log);
  const Geometry G = make_geometry(build_structure(c));
  const AKStructure& J = G.structure;
  rep.calabi = calabi_functional(G);
  const TangentField v = build_tangent(c, c.v, J);

  try {
    const GeodesicCurve curve = geodesic_integrate(J, v, c.geodesic_T, c.geodesic_dt, 1e-6);
    const AKStructure closed = geodesic_closed_form(J, v, c.geodesic_T);
    add(make_report("geodesic_closed_form", (curve.J - closed.J()).max_abs(), closed.J().max_abs(),
                    c.tolerances.geodesic, J.grid(), false,
                    "RK4 on J'' = J'J'J against exp(tb) J exp(-tb) at T = " + fmt(c.geodesic_T)));
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,res_J2,res_compat,speed_drift\n";
    for (const auto& s : curve.samples) csv << s.t << ',' << s.res_J2 << ',' << s.res_compat << ',' << s.speed_drift << '\n';
    write_atomic(out_path(c, "geodesic.csv"), csv.str());
  } catch (const std::domain_error& e) {
    add(make_report("geodesic_closed_form", INFINITY, 1.0, c.tolerances.geodesic, J.grid(), false, e.what()));
  }

  const SecondVariation sv = second_variation_geodesic(G, v, c.fd_steps);
  add(make_report("geodesic_second_variation", std::abs(sv.formula - sv.fd.extrapolated),
                  std::max(std::abs(sv.formula), std::abs(sv.fd.extrapolated)), c.tolerances.hessian, J.grid(), true,
                  "<H(v), v> = " + fmt(sv.formula) + " vs d2C/dt2 = " + fmt(sv.fd.extrapolated)));

  const TensorField accel = compose(compose(v.field(), v.field()), J.J());
  const TensorField j_lkj = compose(J.J(), lie_K_J(G));
  add(make_report("geodesic_acceleration_pairing", std::abs(inner(accel, j_lkj, J)), norm(accel, J) * norm(j_lkj, J),
                  c.tolerances.geodesic, J.grid(), true, "<J'', J L_K J> at t = 0"));
  return rep;
}

VerificationReport run_hessian(const RunConfig& c, std::ostream* log) {
  VerificationReport rep = new_report(c);
  const Add add = collector(rep, log);
  const Geometry G = make_geometry(build_structure(c));
  rep.calabi = calabi_functional(G);
  hessian_checks(c, G, flat_geometry(c, G), add);
  return rep;
}

VerificationReport run_symbol(const RunConfig& c, std::ostream* log) {
  VerificationReport rep = new_report(c);
  const Add add = collector(rep, log);
  const Geometry G = make_geometry(build_structure(c));
  rep.calabi = calabi_functional(G);
  symbol_checks(c, G.structure, flat_geometry(c, G), add);
  return rep;
}

int cmd_verify(const RunConfig& c, std::ostream& log) {
  const VerificationReport rep = run_verify(c, &log);
  log << "calabi " << rep.calabi << "\n";
  return finish(c, rep, c.report_file, log);
}

int cmd_geodesic(const RunConfig& c, std::ostream& log) { return finish(c, run_geodesic(c, &log), "geodesic.json", log); }

int cmd_symbol(const RunConfig& c, std::ostream& log) { return finish(c, run_symbol(c, &log), "symbol.json", log); }

int cmd_hessian(const RunConfig& c, std::ostream& log) {
  const Geometry G = make_geometry(build_structure(c));
  const AKStructure& J = G.structure;
  const TangentField u = build_tangent(c, c.u, J), v = build_tangent(c, c.v, J);
  const double formula = hessian_formula(G, u, v);
  const FdEstimate fd = hessian_fd(J, u, v, c.fd_steps);
  std::ostringstream csv;
  csv.precision(17);
  csv << "step,fd,richardson,formula\n";
  for (std::size_t i = 0; i < fd.steps.size(); ++i)
    csv << fd.steps[i] << ',' << fd.values[i] << ',' << fd.extrapolated << ',' << formula << '\n';
  write_atomic(out_path(c, "hessian.csv"), csv.str());
  return finish(c, run_hessian(c, &log), "hessian.json", log);
}

int cmd_flow(const RunConfig& c, std::ostream& log) {
  const AKStructure J = build_structure(c);
  FlowOptions opts;
  opts.c_cfl = c.c_cfl > 0.0 ? c.c_cfl : default_flow_cfl(c.m);
  opts.dt = c.dt > 0.0 ? c.dt : opts.c_cfl * std::pow(J.grid().spacing(), 4);
  opts.steps = c.steps;
  opts.monotone_tol = c.tolerances.monotone;
  FlowResult result;
  try {
    result = run_flow(J, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const std::string path = out_path(c, c.trace_file);
  write_atomic(path, result.trace.to_csv());
  double worst_invariant = 0.0;
  for (const auto& r : result.trace.records) worst_invariant = std::max({worst_invariant, r.res_J2, r.res_compat});
  const bool invariants = worst_invariant <= c.tolerances.structure;
  const auto& last = result.trace.records.back();
  log.precision(12);
  log << "steps " << result.trace.records.size() - 1 << " dt " << opts.dt << " final t " << last.t << "\n";
  log << "calabi initial " << result.trace.records.front().calabi << " final " << last.calabi << "\n";
  log << "monotone " << (result.monotone ? "yes" : "no") << " (worst relative increase "
      << result.trace.worst_increase() << ")\n";
  log << "invariants " << (invariants ? "ok" : "violated") << " (worst " << worst_invariant << ")\n";
  if (!result.ok) log << "stopped: " << result.message << "\n";
  log << "trace " << path << "\n";
  return result.ok && result.monotone && invariants ? kExitOk : kExitCheckFailed;
}

}  // namespace aklab

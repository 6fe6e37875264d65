#include "aklab/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "aklab/linalg.hpp"
#include "aklab/spectral.hpp"

namespace aklab {

double default_flow_cfl(int m) { return 0.0025 / (m * m); }

TangentField flow_velocity(const Geometry& G) { return JP(G.curvature.hermitian_scalar, G.structure); }

namespace {

// Generator in sp(2m) of the flow velocity at J.
TensorField flow_generator(const AKStructure& J) {
  const Geometry G = make_geometry(J);
  return tangent_generator(J, flow_velocity(G).field());
}

// Inverse of the derivative of exp, truncated after the second commutator.
TensorField dexp_inverse(const TensorField& u, const TensorField& a) {
  const TensorField ua = commutator(u, a);
  return a + 0.5 * ua + (1.0 / 12.0) * commutator(u, ua);
}

FlowRecord record_state(const Geometry& G, double t, double dt) {
  FlowRecord r;
  r.t = t;
  r.dt = dt;
  r.calabi = calabi_functional(G);
  const auto& s = G.curvature.hermitian_scalar;
  r.s_dev = (s.values().array() - G.curvature.mean_hermitian_scalar).abs().maxCoeff();
  const auto res = G.structure.residuals();
  r.min_eig_g = res.min_eig_g;
  r.res_J2 = res.square;
  r.res_compat = res.compatibility;
  return r;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

AKStructure flow_step(const AKStructure& J, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("flow_step: dt must be positive and finite");
  const TensorField k1 = flow_generator(J);
  const TensorField u2 = (0.5 * dt) * k1;
  const TensorField k2 = dexp_inverse(u2, flow_generator(deform(J, u2)));
  const TensorField u3 = (0.5 * dt) * k2;
  const TensorField k3 = dexp_inverse(u3, flow_generator(deform(J, u3)));
  const TensorField u4 = dt * k3;
  const TensorField k4 = dexp_inverse(u4, flow_generator(deform(J, u4)));
  const TensorField u = (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!u.all_finite()) throw std::domain_error("flow_step: non-finite stage, reduce dt");
  return deform(J, u);
}

std::string FlowTrace::to_csv() const {
  std::ostringstream out;
  out << "t,calabi,s_dev,min_eig_g,res_J2,res_compat,dt\n";
  for (const auto& r : records)
    out << format_double(r.t) << ',' << format_double(r.calabi) << ',' << format_double(r.s_dev) << ','
        << format_double(r.min_eig_g) << ',' << format_double(r.res_J2) << ',' << format_double(r.res_compat) << ','
        << format_double(r.dt) << '\n';
  return out.str();
}

double FlowTrace::worst_increase() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double prev = records[i - 1].calabi;
    const double rise = records[i].calabi - prev;
    if (rise > 0.0) worst = std::max(worst, rise / std::max(prev, kRelativeFloor));
  }
  return worst;
}

FlowResult run_flow(const AKStructure& J0, const FlowOptions& options,
                    const std::function<void(const Geometry&, const FlowRecord&)>& observer) {
  const PeriodicGrid& grid = J0.grid();
  const double c_cfl = options.c_cfl > 0.0 ? options.c_cfl : default_flow_cfl(grid.m());
  const double limit = c_cfl * std::pow(grid.spacing(), 4);
  if (!(options.dt > 0.0)) throw std::invalid_argument("run_flow: dt must be positive");
  if (options.dt > limit * (1.0 + 1e-12))
    throw std::invalid_argument("run_flow: dt exceeds the stability bound c_cfl*h^4 = " + format_double(limit));
  if (options.steps < 0) throw std::invalid_argument("run_flow: steps must be non-negative");

  FlowResult result;
  AKStructure J = J0;
  {
    const Geometry G = make_geometry(J);
    const FlowRecord r = record_state(G, 0.0, options.dt);
    result.trace.records.push_back(r);
    if (observer) observer(G, r);
  }
  for (int step = 1; step <= options.steps; ++step) {
    try {
      AKStructure next = flow_step(J, options.dt);
      const Geometry G = make_geometry(next);
      const FlowRecord r = record_state(G, step * options.dt, options.dt);
      if (!(r.min_eig_g > options.min_eig_floor))
        throw std::domain_error("metric degenerates: min eigenvalue " + format_double(r.min_eig_g));
      if (!std::isfinite(r.calabi)) throw std::domain_error("non-finite Calabi functional");
      const double prev = result.trace.records.back().calabi;
      if (r.calabi - prev > options.monotone_tol * std::max(prev, kRelativeFloor)) result.monotone = false;
      result.trace.records.push_back(r);
      if (observer) observer(G, r);
      J = std::move(next);
    } catch (const std::exception& e) {
      result.ok = false;
      result.message = "step " + std::to_string(step) + ": " + e.what();
      break;
    }
  }
  return result;
}

AKStructure geodesic_closed_form(const AKStructure& J0, const TangentField& v0, double t) { return retract(J0, v0, t); }

GeodesicCurve geodesic_integrate(const AKStructure& J0, const TangentField& v0, double T, double dt, double drift_tol,
                                 int sample_every) {
  require_based_at(v0, J0, "geodesic_integrate");
  if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("geodesic_integrate: need dt > 0 and T >= 0");
  const PeriodicGrid& grid = J0.grid();
  const int steps = static_cast<int>(std::llround(T / dt));
  const double h = steps > 0 ? T / steps : 0.0;
  const Mat w = standard_symplectic(grid.m());
  const int d = grid.dim();
  const Mat id = Mat::Identity(d, d);

  std::vector<GeodesicSample> samples;
  for (int s = 0; s <= steps; ++s)
    if (s % sample_every == 0 || s == steps) samples.push_back({s * h, 0.0, 0.0, 0.0});

  GeodesicCurve curve{TensorField(grid, kEndomorphism), TensorField(grid, kEndomorphism), {}};
  auto accel = [](const Mat& j, const Mat& v) -> Mat { return v * v * j; };
  for (std::size_t p = 0; p < grid.size(); ++p) {
    Mat j = J0.J().matrix(p);
    Mat v = v0.field().matrix(p);
    const double speed0 = (v * v).trace();
    std::size_t next_sample = 0;
    for (int s = 0; s <= steps; ++s) {
      if (next_sample < samples.size() && samples[next_sample].t == s * h) {
        auto& smp = samples[next_sample++];
        smp.res_J2 = std::max(smp.res_J2, (j * j + id).cwiseAbs().maxCoeff());
        smp.res_compat = std::max(smp.res_compat, (j.transpose() * w * j - w).cwiseAbs().maxCoeff());
        smp.speed_drift = std::max(smp.speed_drift, std::abs((v * v).trace() - speed0));
      }
      if (s == steps) break;
      const Mat k1j = v, k1v = accel(j, v);
      const Mat k2j = v + 0.5 * h * k1v, k2v = accel(j + 0.5 * h * k1j, k2j);
      const Mat k3j = v + 0.5 * h * k2v, k3v = accel(j + 0.5 * h * k2j, k3j);
      const Mat k4j = v + h * k3v, k4v = accel(j + h * k3j, k4j);
      j += (h / 6.0) * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
      v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    curve.J.matrix(p) = j;
    curve.Jdot.matrix(p) = v;
  }
  for (const auto& smp : samples)
    if (!(smp.res_J2 <= drift_tol) || !(smp.res_compat <= drift_tol))
      throw std::domain_error("geodesic_integrate: invariant drift above tolerance at t = " + format_double(smp.t));
  curve.samples = std::move(samples);
  return curve;
}

namespace {

FdEstimate richardson(std::vector<double> steps, std::vector<double> values) {
  FdEstimate e{std::move(steps), std::move(values), 0.0, 0.0};
  const auto& v = e.values;
  if (v.size() == 1) {
    e.extrapolated = v[0];
  } else if (v.size() == 2) {
    e.extrapolated = (4.0 * v[1] - v[0]) / 3.0;
  } else {
    const double r1 = (4.0 * v[1] - v[0]) / 3.0;
    const double r2 = (4.0 * v[2] - v[1]) / 3.0;
    e.extrapolated = (16.0 * r2 - r1) / 15.0;
    const double denom = v[1] - v[2];
    e.order_ratio = denom != 0.0 ? (v[0] - v[1]) / denom : 0.0;
  }
  return e;
}

}  // namespace

TensorField hessian_mixed_partial(const AKStructure& J, const TangentField& u, const TangentField& v) {
  const TensorField a = tangent_generator(J, u.field());
  const TensorField b = tangent_generator(J, v.field());
  return commutator(commutator(J.J(), a), b);
}

double hessian_formula(const Geometry& G, const TangentField& u, const TangentField& v) {
  const AKStructure& J = G.structure;
  require_based_at(u, J, "hessian_formula");
  require_based_at(v, J, "hessian_formula");
  const TensorField lkj = lie_K_J(G);
  const TensorField j_lkj = compose(J.J(), lkj);
  return -inner(hessian_mixed_partial(J, u, v), j_lkj, J) + inner(u.field(), H(v, G), J) -
         inner(u.field(), compose(v.field(), lkj), J);
}

double hessian_reduced(const Geometry& G, const TangentField& u, const TangentField& v) {
  return 2.0 * inner(JP_star(u, G), JP_star(v, G), G.structure);
}

FdEstimate hessian_fd(const AKStructure& J, const TangentField& u, const TangentField& v,
                      const std::vector<double>& steps) {
  const TensorField a = tangent_generator(J, u.field());
  const TensorField b = tangent_generator(J, v.field());
  std::vector<double> values;
  for (double h : steps) {
    auto C = [&](double s1, double s2) { return calabi_functional(deform(J, s1 * a + s2 * b)); };
    values.push_back((C(h, h) - C(h, -h) - C(-h, h) + C(-h, -h)) / (4.0 * h * h));
  }
  return richardson(steps, values);
}

SecondVariation second_variation_geodesic(const Geometry& G, const TangentField& v, const std::vector<double>& steps) {
  const AKStructure& J = G.structure;
  SecondVariation out;
  out.formula = inner(H(v, G), v.field(), J);
  const double c0 = calabi_functional(G);
  std::vector<double> values;
  for (double h : steps) {
    const double cp = calabi_functional(geodesic_closed_form(J, v, h));
    const double cm = calabi_functional(geodesic_closed_form(J, v, -h));
    values.push_back((cp - 2.0 * c0 + cm) / (h * h));
  }
  out.fd = richardson(steps, values);
  return out;
}

double orbit_residual(const Geometry& G, const TensorField& w, int cutoff) {
  const AKStructure& J = G.structure;
  const PeriodicGrid& grid = J.grid();
  const int dim = grid.dim();
  const int side = 2 * cutoff + 1;
  std::vector<TensorField> columns;
  std::vector<int> k(dim);
  for (int mode = 0; mode < power(side, dim); ++mode) {
    int rest = mode;
    for (int a = dim - 1; a >= 0; --a) {
      k[a] = rest % side - cutoff;
      rest /= side;
    }
    int first = 0;
    while (first < dim && k[first] == 0) ++first;
    if (first == dim || k[first] < 0) continue;
    for (int phase = 0; phase < 2; ++phase) {
      const TensorField f = scalar_field(grid, [&](const Vec& x) {
        double t = 0.0;
        for (int a = 0; a < dim; ++a) t += k[a] * x[a];
        return phase == 0 ? std::cos(t) : std::sin(t);
      });
      columns.push_back(P(f, J).field());
      columns.push_back(JP(f, J).field());
    }
  }
  const int nc = static_cast<int>(columns.size());
  Eigen::MatrixXd gram(nc, nc);
  Eigen::VectorXd rhs(nc);
  for (int i = 0; i < nc; ++i) {
    rhs[i] = inner(columns[i], w, J);
    for (int j = i; j < nc; ++j) gram(i, j) = gram(j, i) = inner(columns[i], columns[j], J);
  }
  const double ww = inner(w, w, J);
  if (ww <= 0.0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double cut = 1e-12 * eig.eigenvalues().cwiseAbs().maxCoeff();
  double captured = 0.0;
  for (int i = 0; i < nc; ++i) {
    const double lam = eig.eigenvalues()[i];
    if (lam <= cut) continue;
    const double c = eig.eigenvectors().col(i).dot(rhs);
    captured += c * c / lam;
  }
  return std::sqrt(std::max(0.0, ww - captured) / ww);
}

}  // namespace aklab

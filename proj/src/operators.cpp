#include "aklab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aklab/spectral.hpp"

namespace aklab {

OperatorReport make_report(std::string name, double absolute, double reference, double tol, const PeriodicGrid& grid,
                           bool relative_test, std::string note) {
  OperatorReport r;
  r.name = std::move(name);
  r.absolute = absolute;
  r.reference = reference;
  r.relative = absolute / std::max(reference, kRelativeFloor);
  r.tolerance = tol;
  r.relative_test = relative_test;
  const double measured = relative_test ? r.relative : r.absolute;
  r.pass = std::isfinite(measured) && measured <= tol;
  r.m = grid.m();
  r.n = grid.n();
  r.note = std::move(note);
  return r;
}

namespace {

// Applies mat to slot s of a component vector (length d^order) in place via scratch.
void transform_slot(const double* in, double* out, int order, int d, int s, const Mat& mat) {
  const int nc = power(d, order);
  const int stride = power(d, order - 1 - s);
  for (int c = 0; c < nc; ++c) {
    const int a = (c / stride) % d;
    const int base = c - a * stride;
    double acc = 0.0;
    for (int e = 0; e < d; ++e) acc += mat(a, e) * in[base + e * stride];
    out[c] = acc;
  }
}

}  // namespace

double inner(const TensorField& u, const TensorField& v, const AKStructure& J) {
  require_same_grid(u, v, "inner");
  require_same_grid(u, J.J(), "inner");
  require_rank(v, u.rank(), "inner");
  const int d = u.dim();
  const int order = u.rank().order();
  const int nc = u.components();
  std::vector<double> a(nc), b(nc);
  TensorField density(u.grid(), kScalar);
  for (std::size_t p = 0; p < u.points(); ++p) {
    std::copy(v.data(p), v.data(p) + nc, a.begin());
    const Mat g = J.g().matrix(p);
    const Mat ginv = J.g_inv().matrix(p);
    for (int s = 0; s < order; ++s) {
      transform_slot(a.data(), b.data(), order, d, s, s < u.rank().upper ? g : ginv);
      std::swap(a, b);
    }
    double acc = 0.0;
    const double* x = u.data(p);
    for (int c = 0; c < nc; ++c) acc += x[c] * a[c];
    density(p) = acc;
  }
  return integrate(density);
}

double trace_inner(const TensorField& u, const TensorField& v) {
  require_rank(u, kEndomorphism, "trace_inner");
  require_rank(v, kEndomorphism, "trace_inner");
  return integrate(trace(compose(u, v)));
}

double norm(const TensorField& u, const AKStructure& J) { return std::sqrt(std::max(0.0, inner(u, u, J))); }

TensorField lie_derivative(const TensorField& X, const TensorField& v) {
  require_rank(X, kVector, "lie_derivative");
  require_rank(v, kEndomorphism, "lie_derivative");
  require_same_grid(X, v, "lie_derivative");
  const int d = v.dim();
  const auto dv = spectral_gradient(v);
  const auto dX = spectral_gradient(X);
  TensorField out(v.grid(), kEndomorphism);
  Mat M(d, d);
  for (std::size_t p = 0; p < out.points(); ++p) {
    const auto x = X.vector(p);
    const Mat vm = v.matrix(p);
    Mat acc = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      acc += x[i] * dv[i].matrix(p);
      for (int q = 0; q < d; ++q) M(q, i) = dX[i](p, q);
    }
    out.matrix(p) = acc - M * vm + vm * M;
  }
  return out;
}

TangentField P(const TensorField& f, const AKStructure& J) {
  require_rank(f, kScalar, "P");
  return TangentField::trusted(J, 0.5 * lie_derivative(grad_omega(f, J), J.J()));
}

TangentField JP(const TensorField& f, const AKStructure& J) {
  return TangentField::trusted(J, compose(J.J(), P(f, J).field()));
}

TangentField apply_J(const TangentField& v, const AKStructure& J) {
  require_based_at(v, J, "apply_J");
  return TangentField::trusted(J, compose(J.J(), v.field()));
}

TensorField P_star(const TangentField& v, const Geometry& G) {
  const AKStructure& J = G.structure;
  require_based_at(v, J, "P_star");
  const TensorField Jv = compose(J.J(), v.field());
  const TensorField div = delta(Jv, J, G.connection);
  const TensorField alpha = complex_one_form(flat(div, J), J);
  return delta(alpha, J, G.connection);
}

TensorField JP_star(const TangentField& v, const Geometry& G) { return -P_star(apply_J(v, G.structure), G); }

TensorField variation_s(const TangentField& v, const Geometry& G) { return -JP_star(v, G); }

TensorField lie_K_J(const Geometry& G) { return lie_derivative(G.curvature.K, G.structure.J()); }

double variation_C(const TangentField& v, const Geometry& G) {
  require_based_at(v, G.structure, "variation_C");
  return -inner(v.field(), compose(G.structure.J(), lie_K_J(G)), G.structure);
}

TensorField lichnerowicz(const TensorField& f, const Geometry& G) { return P_star(P(f, G.structure), G); }

TensorField laplacian(const TensorField& f, const Geometry& G) { return delta(d(f), G.structure, G.connection); }

TensorField lichnerowicz_explicit(const TensorField& f, const Geometry& G) {
  const AKStructure& J = G.structure;
  const auto& curv = G.curvature;
  const TensorField df = d(f);

  TensorField bilaplacian = laplacian(laplacian(f, G), G);

  const TensorField div_ric = delta(curv.ricci_plus, J, G.connection);
  TensorField ric_term(f.grid(), kScalar);
  for (std::size_t p = 0; p < ric_term.points(); ++p)
    ric_term(p) = div_ric.vector(p).dot(J.g_inv().matrix(p) * df.vector(p));

  const TensorField rho_term = two_form_inner(curv.rho, exterior_derivative(d_c(f, J)), J);

  const TensorField hess = covariant_derivative(df, G.connection.christoffel);
  TensorField twisted(f.grid(), kBilinear);
  for (std::size_t p = 0; p < twisted.points(); ++p) {
    const auto j = J.J().matrix(p);
    twisted.matrix(p) = j.transpose() * hess.matrix(p) * j;
  }
  const TensorField twisted_term = delta(delta(twisted, J, G.connection), J, G.connection);

  return 0.5 * bilaplacian - 2.0 * ric_term + 2.0 * rho_term + twisted_term;
}

TensorField lie_K_scalar(const TensorField& f, const Geometry& G) { return apply_vector(G.curvature.K, f); }

TensorField lie_K_tangent(const TensorField& v, const Geometry& G) { return lie_derivative(G.curvature.K, v); }

ComplexScalarField calabi_plus(const ComplexScalarField& F, const Geometry& G) {
  return {lichnerowicz(F.re, G) - 0.5 * lie_K_scalar(F.im, G), lichnerowicz(F.im, G) + 0.5 * lie_K_scalar(F.re, G)};
}

ComplexScalarField calabi_minus(const ComplexScalarField& F, const Geometry& G) {
  return {lichnerowicz(F.re, G) + 0.5 * lie_K_scalar(F.im, G), lichnerowicz(F.im, G) - 0.5 * lie_K_scalar(F.re, G)};
}

TensorField H(const TangentField& v, const Geometry& G) {
  const AKStructure& J = G.structure;
  const TensorField jp_jpstar = JP(JP_star(v, G), J).field();
  return 2.0 * jp_jpstar - compose(J.J(), lie_K_tangent(v.field(), G));
}

TensorField H_tilde(const TangentField& v, const Geometry& G) {
  return -H(v, G) + compose(v.field(), lie_K_J(G));
}

double calabi_functional(const Geometry& G) {
  const TensorField& s = G.curvature.hermitian_scalar;
  TensorField sq = s;
  sq.values() = s.values().cwiseProduct(s.values());
  return integrate(sq);
}

double calabi_functional(const AKStructure& J) {
  const ConnectionData conn = christoffel(J);
  const CurvatureBundle curv = curvature_bundle(J, conn, false);
  TensorField sq = curv.hermitian_scalar;
  sq.values() = sq.values().cwiseProduct(sq.values());
  return integrate(sq);
}

}  // namespace aklab

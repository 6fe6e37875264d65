#pragma once

// Shared fixtures and independent oracles for the unit suites.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "aklab/operators.hpp"
#include "aklab/spectral.hpp"

namespace aklab::test {

/// Trigonometric polynomial with explicit coefficients; value and derivatives are evaluated in closed form.
struct TrigPoly {
  struct Term {
    std::vector<int> k;
    double c = 0.0;  // cos coefficient
    double s = 0.0;  // sin coefficient
  };
  std::vector<Term> terms;

  static TrigPoly random(int dim, int cutoff, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> kd(-cutoff, cutoff);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    TrigPoly p;
    for (int t = 0; t < count; ++t) {
      Term term;
      for (int a = 0; a < dim; ++a) term.k.push_back(kd(rng));
      term.c = ud(rng);
      term.s = ud(rng);
      p.terms.push_back(term);
    }
    return p;
  }

  double phase(const Term& t, const Vec& x) const {
    double th = 0.0;
    for (std::size_t a = 0; a < t.k.size(); ++a) th += t.k[a] * x[a];
    return th;
  }
  double value(const Vec& x) const {
    double v = 0.0;
    for (const auto& t : terms) v += t.c * std::cos(phase(t, x)) + t.s * std::sin(phase(t, x));
    return v;
  }
  double partial(const Vec& x, int axis) const {
    double v = 0.0;
    for (const auto& t : terms) v += t.k[axis] * (-t.c * std::sin(phase(t, x)) + t.s * std::cos(phase(t, x)));
    return v;
  }
  /// Integral over the torus: only constant terms survive.
  double integral(int dim) const {
    double v = 0.0;
    for (const auto& t : terms) {
      bool zero = true;
      for (int k : t.k) zero &= k == 0;
      if (zero) v += t.c;
    }
    return v * std::pow(2.0 * M_PI, dim);
  }
  TensorField sample(const PeriodicGrid& grid) const {
    return scalar_field(grid, [&](const Vec& x) { return value(x); });
  }
};

inline TangentField random_tangent(const AKStructure& J, std::uint64_t seed, int cutoff, double amp = 1.0) {
  return TangentField(J, commutator(J.J(), SpPotential::random(J.grid(), seed, cutoff, amp).field()));
}

inline AKStructure flat_structure(const PeriodicGrid& grid) { return make_structure(SpPotential::zero(grid)); }

inline AKStructure perturbed(const PeriodicGrid& grid, std::uint64_t seed, int cutoff, double eps) {
  return make_structure(SpPotential::random(grid, seed, cutoff, eps));
}

/// L2 relative gap of two fields of the same rank.
inline double rel_gap(const TensorField& a, const TensorField& b, const AKStructure& J) {
  return norm(a - b, J) / std::max(norm(b, J), 1e-300);
}

/// Truncated Taylor series of exp; an oracle for small matrices.
inline Eigen::MatrixXd taylor_exp(const Eigen::MatrixXd& a, int terms = 40) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd term = out;
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    out += term;
  }
  return out;
}

/// Gaussian curvature of g = E dx^2 + 2F dx dy + G dy^2 by the Brioschi formula.
inline TensorField brioschi(const AKStructure& J) {
  const PeriodicGrid& grid = J.grid();
  const TensorField E = J.g().component(0), F = J.g().component(1), G = J.g().component(3);
  auto D = [](const TensorField& f, int a) { return spectral_partial(f, a); };
  const TensorField Eu = D(E, 0), Ev = D(E, 1), Fu = D(F, 0), Fv = D(F, 1), Gu = D(G, 0), Gv = D(G, 1);
  const TensorField Evv = D(Ev, 1), Fuv = D(Fu, 1), Guu = D(Gu, 0);
  TensorField K(grid, kScalar);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    Eigen::Matrix3d A, B;
    A << -0.5 * Evv(p) + Fuv(p) - 0.5 * Guu(p), 0.5 * Eu(p), Fu(p) - 0.5 * Ev(p),  //
        Fv(p) - 0.5 * Gu(p), E(p), F(p),                                          //
        0.5 * Gv(p), F(p), G(p);
    B << 0.0, 0.5 * Ev(p), 0.5 * Gu(p),  //
        0.5 * Ev(p), E(p), F(p),         //
        0.5 * Gu(p), F(p), G(p);
    const double det = E(p) * G(p) - F(p) * F(p);
    K(p) = (A.determinant() - B.determinant()) / (det * det);
  }
  return K;
}

/// Kahler form of the Lichnerowicz operator on surfaces: Delta^2 f / 2 + (ds, df) / 2 + (rho, dd^c f).
inline TensorField kahler_lichnerowicz(const TensorField& f, const Geometry& G) {
  const AKStructure& J = G.J();
  const TensorField ds = d(G.curvature.scalar), df = d(f);
  TensorField pairing(f.grid(), kScalar);
  for (std::size_t p = 0; p < f.points(); ++p) pairing(p) = ds.vector(p).dot(J.g_inv().matrix(p) * df.vector(p));
  const TensorField ddc = exterior_derivative(d_c(f, J));
  return 0.5 * laplacian(laplacian(f, G), G) + 0.5 * pairing + two_form_inner(G.curvature.rho, ddc, J);
}

}  // namespace aklab::test

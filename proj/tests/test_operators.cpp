#include <doctest.h>

#include "aklab/dynamics.hpp"
#include "aklab/identities.hpp"
#include "aklab/linalg.hpp"
#include "support.hpp"

using namespace aklab;
using aklab::test::perturbed;
using aklab::test::random_tangent;

namespace {

TensorField sin_mode(const PeriodicGrid& g, int k, int axis = 0) {
  return scalar_field(g, [=](const Vec& x) { return std::sin(k * x[axis]); });
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("inner products") {
  const PeriodicGrid g(1, 16);
  const AKStructure F = aklab::test::flat_structure(g);
  Mat u = Mat::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = -1.0;
  const TensorField U = constant_matrix_field(g, kEndomorphism, u);
  CHECK(inner(U, U, F) == doctest::Approx(2 * 4 * M_PI * M_PI).epsilon(1e-14));

  const AKStructure J = perturbed(g, 1, 3, 0.3);
  const TangentField v = random_tangent(J, 2, 3);
  CHECK(rel(inner(v.field(), v.field(), J), trace_inner(v.field(), v.field())) < 1e-10);
  const TensorField f = random_band_limited(g, 3, 3, 1.0);
  CHECK(inner(f, f, J) > 0.0);
  CHECK_THROWS(inner(f, v.field(), J));
}

TEST_CASE("P on the flat torus") {
  const PeriodicGrid g(1, 16);
  const AKStructure F = aklab::test::flat_structure(g);
  const TensorField s = sin_mode(g, 1);
  const TensorField p = P(s, F).field();
  // oracle: pull J back by the Hamiltonian flow x -> (x1, x2 + t cos x1), centered difference in t
  const double t = 1e-4;
  double gap = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double x1 = g.coordinate(q, 0);
    auto pull = [&](double tt) {
      Eigen::Matrix2d dphi;
      dphi << 1.0, 0.0, -tt * std::sin(x1), 1.0;
      const Eigen::Matrix2d j0 = standard_complex(1);
      return Eigen::Matrix2d(dphi.inverse() * j0 * dphi);
    };
    const Eigen::Matrix2d fd = 0.5 * (pull(t) - pull(-t)) / (2 * t);
    Eigen::Matrix2d expect = Eigen::Matrix2d::Zero();
    expect(0, 0) = 0.5 * std::sin(x1);
    expect(1, 1) = -0.5 * std::sin(x1);
    gap = std::max(gap, (Eigen::Matrix2d(p.matrix(q)) - expect).cwiseAbs().maxCoeff());
    CHECK((fd - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK(gap < 1e-14);
  const auto one = constant_field(g, kScalar, Eigen::VectorXd::Constant(1, 3.0));
  CHECK(P(one, F).field().max_abs() == 0.0);
  CHECK((P(s + one, F).field() - p).max_abs() < 1e-14);
}

TEST_CASE("P agrees with the alternative formula through D grad_omega f") {
  const PeriodicGrid g(1, 48);
  const AKStructure J = perturbed(g, 4, 3, 0.3);
  const ConnectionData c = christoffel(J);
  const TensorField f = random_band_limited(g, 5, 3, 1.0);
  const TangentField v = random_tangent(J, 6, 3);
  // <L_X J, v> = -2 <D X, J v>, X = grad_omega f
  const TensorField DX = covariant_derivative(grad_omega(f, J), c.christoffel);
  const double lhs = inner(2.0 * P(f, J).field(), v.field(), J);
  const double rhs = -2.0 * trace_inner(DX, compose(J.J(), v.field()));
  CHECK(rel(lhs, rhs) < 1e-8);
}

TEST_CASE("adjoint pairs and the Lichnerowicz operator") {
  const PeriodicGrid g(1, 48);
  const Geometry G = make_geometry(perturbed(g, 7, 3, 0.3));
  const AKStructure& J = G.J();
  const TensorField f = random_band_limited(g, 8, 3, 1.0), h = random_band_limited(g, 9, 3, 1.0);
  const TangentField v = random_tangent(J, 10, 3);
  CHECK(rel(inner(P(f, J).field(), v.field(), J), inner(f, P_star(v, G), J)) < 1e-8);
  CHECK(rel(inner(JP(f, J).field(), v.field(), J), inner(f, JP_star(v, G), J)) < 1e-8);
  CHECK((JP_star(v, G) + P_star(apply_J(v, J), G)).max_abs() < 1e-12 * P_star(v, G).max_abs());
  CHECK(P_star(TangentField(J, TensorField(g, kEndomorphism)), G).max_abs() == 0.0);

  const TensorField L = lichnerowicz(f, G);
  CHECK((L - JP_star(JP(f, J), G)).max_abs() <= 1e-9 * L.max_abs());
  CHECK(rel(inner(L, h, J), inner(f, lichnerowicz(h, G), J)) < 1e-8);
  CHECK(inner(L, f, J) == doctest::Approx(inner(P(f, J).field(), P(f, J).field(), J)).epsilon(1e-8));
  CHECK(inner(L, f, J) > 0.0);
}

TEST_CASE("Lichnerowicz operator on the flat torus") {
  const PeriodicGrid g(2, 8);
  const Geometry G = make_geometry(aklab::test::flat_structure(g));
  CHECK((lichnerowicz(sin_mode(g, 1), G) - 0.5 * sin_mode(g, 1)).max_abs() < 1e-13);
  CHECK((lichnerowicz(sin_mode(g, 2, 3), G) - 8.0 * sin_mode(g, 2, 3)).max_abs() < 1e-12);
  const TensorField f = random_band_limited(g, 11, 2, 1.0);
  CHECK((lichnerowicz_explicit(f, G) - lichnerowicz(f, G)).max_abs() < 1e-12);
  const TensorField lap = laplacian(f, G);
  CHECK((lichnerowicz(f, G) - 0.5 * laplacian(lap, G)).max_abs() < 1e-12);
  // orthogonality of P and JP images when s is constant
  CHECK(std::abs(inner(P(f, G.J()).field(), JP(random_band_limited(g, 12, 2, 1.0), G.J()).field(), G.J())) < 1e-12);
  CHECK(lie_K_scalar(f, G).max_abs() == 0.0);
}

TEST_CASE("flat kernel of the Lichnerowicz operator coincides with the kernel of P") {
  // discretize on the band-limited Fourier basis of T2 and compare ranks
  const PeriodicGrid g(1, 12);
  const Geometry G = make_geometry(aklab::test::flat_structure(g));
  std::vector<TensorField> basis;
  basis.push_back(constant_field(g, kScalar, Eigen::VectorXd::Ones(1)));
  for (int a = -2; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      if (b == 0 && a <= 0) continue;
      basis.push_back(scalar_field(g, [=](const Vec& x) { return std::cos(a * x[0] + b * x[1]); }));
      basis.push_back(scalar_field(g, [=](const Vec& x) { return std::sin(a * x[0] + b * x[1]); }));
    }
  const int nb = static_cast<int>(basis.size());
  Eigen::MatrixXd Lm(nb, nb), Pm(nb, nb);
  for (int i = 0; i < nb; ++i) {
    const TensorField Lf = lichnerowicz(basis[i], G);
    const TensorField Pf = P(basis[i], G.J()).field();
    for (int j = 0; j < nb; ++j) {
      Lm(j, i) = inner(basis[j], Lf, G.J());
      Pm(j, i) = inner(P(basis[j], G.J()).field(), Pf, G.J());
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu_l(Lm), lu_p(Pm);
  lu_l.setThreshold(1e-10);
  lu_p.setThreshold(1e-10);
  CHECK(lu_l.rank() == nb - 1);
  CHECK(lu_p.rank() == nb - 1);
}

TEST_CASE("explicit Lichnerowicz formula and its Kahler reduction on surfaces") {
  const PeriodicGrid g(1, 64);
  const Geometry G = make_geometry(perturbed(g, 13, 3, 0.3));
  const AKStructure& J = G.J();
  const TensorField f = random_band_limited(g, 14, 3, 1.0);
  const TensorField L = lichnerowicz(f, G), Le = lichnerowicz_explicit(f, G);
  CHECK(aklab::test::rel_gap(Le, L, J) <= 1e-6);

  const TensorField reduction = aklab::test::kahler_lichnerowicz(f, G);
  CHECK(aklab::test::rel_gap(reduction, L, J) <= 1e-5);
}

TEST_CASE("explicit Lichnerowicz formula on a non-integrable structure") {
  const PeriodicGrid g(2, 12);
  const Geometry G = make_geometry(perturbed(g, 15, 1, 0.05));
  CHECK(nijenhuis(G.J()).max_abs() > 1e-3);
  const TensorField f = random_band_limited(g, 16, 1, 1.0);
  CHECK(aklab::test::rel_gap(lichnerowicz_explicit(f, G), lichnerowicz(f, G), G.J()) <= 1e-5);
}

TEST_CASE("extremal vector field identities") {
  const PeriodicGrid g(1, 48);
  const Geometry G = make_geometry(perturbed(g, 17, 3, 0.3));
  const AKStructure& J = G.J();
  const TensorField f = random_band_limited(g, 18, 3, 1.0), h = random_band_limited(g, 19, 3, 1.0);
  const TensorField lk = lie_K_scalar(f, G);
  CHECK(lk.max_abs() > 1e-3);
  CHECK((lk - poisson(G.curvature.hermitian_scalar, f, J)).max_abs() <= 1e-8 * lk.max_abs());
  CHECK((lk - 2.0 * JP_star(P(f, J), G)).max_abs() <= 1e-8 * lk.max_abs());
  CHECK((lk + 2.0 * P_star(JP(f, J), G)).max_abs() <= 1e-8 * lk.max_abs());
  CHECK(std::abs(inner(lk, f, J)) <= 1e-9 * inner(f, f, J));
  CHECK(std::abs(inner(lk, h, J) + inner(f, lie_K_scalar(h, G), J)) <= 1e-9 * norm(f, J) * norm(h, J));

  const TangentField u = random_tangent(J, 20, 3), v = random_tangent(J, 21, 3);
  const double a = inner(lie_K_tangent(u.field(), G), v.field(), J), b = inner(u.field(), lie_K_tangent(v.field(), G), J);
  CHECK(std::abs(a + b) <= 1e-9 * norm(u.field(), J) * norm(v.field(), J));

  // Salamon: <P f, JP h> = 1/2 <s, {f, h}>
  const double lhs = inner(P(f, J).field(), JP(h, J).field(), J);
  const double rhs = 0.5 * inner(G.curvature.hermitian_scalar, poisson(f, h, J), J);
  CHECK(std::abs(lhs) > 1e-4);
  CHECK(rel(lhs, rhs) < 1e-7);
}

TEST_CASE("complex Calabi operators and H") {
  const PeriodicGrid g(1, 32);
  const Geometry G = make_geometry(perturbed(g, 22, 3, 0.2));
  const AKStructure& J = G.J();
  const ComplexScalarField F{random_band_limited(g, 23, 3, 1.0), random_band_limited(g, 24, 3, 1.0)};
  const ComplexScalarField plus = calabi_plus(F, G), minus = calabi_minus(F, G);
  CHECK((plus.re + minus.re - 2.0 * lichnerowicz(F.re, G)).max_abs() < 1e-10);
  CHECK((plus.im + minus.im - 2.0 * lichnerowicz(F.im, G)).max_abs() < 1e-10);
  CHECK((plus.re - lichnerowicz(F.re, G) + 0.5 * lie_K_scalar(F.im, G)).max_abs() < 1e-12);
  // Hermitian pairing <L+ F, F> has non-negative real part
  CHECK(inner(plus.re, F.re, J) + inner(plus.im, F.im, J) >= 0.0);

  const TangentField v = random_tangent(J, 25, 3);
  const TensorField lkj = lie_K_J(G);
  CHECK((H_tilde(v, G) + H(v, G) - compose(v.field(), lkj)).max_abs() < 1e-10);

  const PeriodicGrid g2(1, 16);
  const Geometry flat = make_geometry(aklab::test::flat_structure(g2));
  const TensorField f = random_band_limited(g2, 26, 2, 1.0);
  CHECK(H(P(f, flat.J()), flat).max_abs() < 1e-12);
  const TangentField w = JP(f, flat.J());
  const TensorField Lf = lichnerowicz(f, flat);
  CHECK(inner(H(w, flat), w.field(), flat.J()) == doctest::Approx(2.0 * inner(Lf, Lf, flat.J())).epsilon(1e-10));
  const ComplexScalarField R{f, TensorField(g2, kScalar)};
  CHECK((calabi_plus(R, flat).re - 0.5 * laplacian(laplacian(f, flat), flat)).max_abs() < 1e-11);
  CHECK(calabi_minus(R, flat).im.max_abs() < 1e-14);
}

TEST_CASE("first variations") {
  const PeriodicGrid g(1, 48);
  const Geometry G = make_geometry(perturbed(g, 27, 3, 0.2));
  const AKStructure& J = G.J();
  const TangentField v = random_tangent(J, 28, 3);

  SUBCASE("Hermitian scalar curvature, second order in t") {
    const TensorField exact = variation_s(v, G);
    double err[2];
    const double ts[2] = {2e-3, 1e-3};
    for (int i = 0; i < 2; ++i) {
      const double t = ts[i];
      const TensorField sp = make_geometry(retract(J, v, t)).curvature.hermitian_scalar;
      const TensorField sm = make_geometry(retract(J, v, -t)).curvature.hermitian_scalar;
      err[i] = ((1.0 / (2 * t)) * (sp - sm) - exact).max_abs();
    }
    CHECK(err[1] <= 1e-5 * exact.max_abs());
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("Calabi functional") {
    const double t = 1e-3;
    const double fd = (calabi_functional(retract(J, v, t)) - calabi_functional(retract(J, v, -t))) / (2 * t);
    const double exact = variation_C(v, G);
    CHECK(rel(fd, exact) < 1e-5);
    CHECK(exact == doctest::Approx(-inner(v.field(), compose(J.J(), lie_K_J(G)), J)).epsilon(1e-8));
    const TensorField f = random_band_limited(g, 29, 3, 1.0);
    CHECK(std::abs(variation_C(P(f, J), G)) <= 1e-9 * std::abs(variation_C(JP(f, J), G)));
    CHECK((variation_s(JP(f, J), G) + lichnerowicz(f, G)).max_abs() <= 1e-9 * lichnerowicz(f, G).max_abs());
  }
  SUBCASE("flat structure is critical") {
    const Geometry F = make_geometry(aklab::test::flat_structure(g));
    CHECK(variation_C(random_tangent(F.J(), 30, 3), F) == 0.0);
    CHECK(calabi_functional(F) == 0.0);
  }
}

TEST_CASE("identity battery") {
  SUBCASE("passes on flat and random structures") {
    for (int m : {1, 2}) {
      const PeriodicGrid g(m, m == 1 ? 32 : 12);
      for (const AKStructure& J : {aklab::test::flat_structure(g), perturbed(g, 31, m == 1 ? 3 : 1, 0.1)}) {
        for (const OperatorReport& r : identity_battery(J, christoffel(J), {.seed = 3, .cutoff = m == 1 ? 2 : 1}))
          CHECK_MESSAGE(r.pass, r.name << " residual " << r.relative);
      }
    }
  }
  SUBCASE("flags a structure that is not compatible") {
    const PeriodicGrid g(1, 16);
    const AKStructure J = perturbed(g, 32, 2, 0.2);
    TensorField bad = J.J();
    const TensorField bump = random_band_limited(g, 33, 2, 0.2, kEndomorphism);
    bad += bump;
    const AKStructure broken = AKStructure::unchecked(bad, J.g());
    bool any_fail = false;
    for (const OperatorReport& r : identity_battery(broken, christoffel(broken))) any_fail |= !r.pass;
    CHECK(any_fail);
  }
}

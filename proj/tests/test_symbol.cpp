#include <doctest.h>

#include "aklab/linalg.hpp"
#include "aklab/symbol.hpp"
#include "support.hpp"

using namespace aklab;
using aklab::test::perturbed;

namespace {

struct Fiber {
  Mat J, g, gi;
};

Fiber fiber_at(const AKStructure& S, std::size_t p) { return {S.J().matrix(p), S.g().matrix(p), S.g_inv().matrix(p)}; }

Eigen::MatrixXd random_fiber_vector(const Fiber& f, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const auto basis = tangent_fiber_basis(f.J, f.g, f.gi);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(f.J.rows(), f.J.cols());
  for (const Mat& b : basis) v += nd(rng) * Eigen::MatrixXd(b);
  return v;
}

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Xi is a tangent fiber vector") {
  const PeriodicGrid g(2, 8);
  const AKStructure S = perturbed(g, 1, 2, 0.3);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    const Fiber f = fiber_at(S, pick(rng));
    Eigen::VectorXd xi(4);
    for (int a = 0; a < 4; ++a) xi[a] = nd(rng);
    const Eigen::MatrixXd X = make_xi(f.J, f.gi, xi);
    const double scale = xi.squaredNorm();
    CHECK(max_abs(X * f.J + f.J * X) <= 1e-12 * scale);
    const Eigen::MatrixXd gx = f.g * X;
    CHECK(max_abs(gx - gx.transpose()) <= 1e-12 * scale);
    // (Xi, v) = 2 (J xi#, v xi#)
    const Eigen::MatrixXd v = random_fiber_vector(f, rng);
    const Eigen::VectorXd up = f.gi * xi;
    const double rhs = 2.0 * (f.J * up).dot(f.g * (v * up));
    CHECK(fiber_inner(X, v, f.g, f.gi) == doctest::Approx(rhs).epsilon(1e-12));
    // (Xi, J Xi) = 0 and quadratic homogeneity
    CHECK(std::abs(fiber_inner(X, Eigen::MatrixXd(f.J * X), f.g, f.gi)) <= 1e-12 * scale * scale);
    const Eigen::VectorXd xi3 = 3.0 * xi;
    CHECK(max_abs(make_xi(f.J, f.gi, xi3) - 9.0 * X) <= 1e-12 * 9.0 * scale);
  }
}

TEST_CASE("Xi on the flat torus by hand") {
  const Mat j0 = standard_complex(1);
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  const Eigen::Vector2d dx1(1.0, 0.0);
  // xi# = d1, J xi# = d2, J xi = -xi o J = dx2: Xi = d1 (x) dx2 + d2 (x) dx1
  Eigen::Matrix2d expect;
  expect << 0.0, 1.0, 1.0, 0.0;
  const Eigen::MatrixXd X = make_xi(j0, I, dx1);
  CHECK(max_abs(X - expect) == 0.0);
  CHECK(fiber_inner(X, X, I, I) == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_xi(j0, I, Eigen::Vector2d::Zero()), std::invalid_argument);
}

TEST_CASE("symbol formula") {
  const PeriodicGrid g(1, 8);
  const AKStructure S = perturbed(g, 3, 2, 0.3);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const Fiber f = fiber_at(S, static_cast<std::size_t>(trial * 3));
    const Eigen::Vector2d xi(nd(rng), nd(rng));
    const Eigen::MatrixXd X = make_xi(f.J, f.gi, xi);
    const Eigen::MatrixXd v = random_fiber_vector(f, rng);
    const Eigen::MatrixXd sv = symbol_formula(v, X, f.g, f.gi);
    const double vx = fiber_inner(v, X, f.g, f.gi);
    CHECK(fiber_inner(sv, v, f.g, f.gi) == doctest::Approx(0.5 * vx * vx).epsilon(1e-12));
    CHECK(fiber_inner(sv, v, f.g, f.gi) >= 0.0);
    const double xx = fiber_inner(X, X, f.g, f.gi);
    CHECK(max_abs(symbol_formula(X, X, f.g, f.gi) - 0.5 * xx * X) <= 1e-12 * xx * max_abs(X));
    const Eigen::MatrixXd jx = f.J * X;
    CHECK(max_abs(symbol_formula(jx, X, f.g, f.gi)) <= 1e-12 * xx * max_abs(X));
    // quartic homogeneity
    const Eigen::MatrixXd X2 = make_xi(f.J, f.gi, Eigen::Vector2d(2.0 * xi));
    CHECK(max_abs(symbol_formula(v, X2, f.g, f.gi) - 16.0 * sv) <= 1e-11 * max_abs(sv) * 16.0);
  }
}

TEST_CASE("tangent fiber basis") {
  for (int m : {1, 2}) {
    const PeriodicGrid g(m, 8);
    const AKStructure S = perturbed(g, 5, 2, 0.3);
    const Fiber f = fiber_at(S, 11);
    const auto basis = tangent_fiber_basis(f.J, f.g, f.gi);
    REQUIRE(static_cast<int>(basis.size()) == m * (m + 1));
    for (std::size_t a = 0; a < basis.size(); ++a) {
      const Eigen::MatrixXd b = basis[a];
      CHECK(max_abs(b * f.J + f.J * b) <= 1e-12);
      for (std::size_t c = 0; c < basis.size(); ++c)
        CHECK(fiber_inner(b, Eigen::MatrixXd(basis[c]), f.g, f.gi) == doctest::Approx(a == c ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("flat extraction recovers the symbol") {
  const PeriodicGrid g(1, 16);
  const Geometry F = make_geometry(aklab::test::flat_structure(g));
  Mat V = Mat::Zero(2, 2);
  V(0, 1) = V(1, 0) = 1.0;
  SUBCASE("k = (1, 0), V = diag(1, -1) is orthogonal to Xi") {
    Mat D = Mat::Zero(2, 2);
    D(0, 0) = 1.0;
    D(1, 1) = -1.0;
    const SymbolExtraction e = extract_symbol(F, {1, 0}, D);
    CHECK(max_abs(e.formula) == 0.0);
    CHECK(max_abs(e.cos_to_cos) <= 1e-10);
    CHECK(max_abs(e.sin_to_sin) <= 1e-10);
  }
  SUBCASE("k = (1, 0), V parallel to Xi") {
    const SymbolExtraction e = extract_symbol(F, {1, 0}, V);
    const double scale = max_abs(e.formula);
    CHECK(scale > 0.1);
    CHECK(max_abs(e.cos_to_cos - e.formula) <= 1e-10 * scale);
    CHECK(max_abs(e.sin_to_sin - e.formula) <= 1e-10 * scale);
    CHECK(max_abs(e.cos_to_sin) <= 1e-10 * scale);
    CHECK(max_abs(e.sin_to_cos) <= 1e-10 * scale);
  }
  SUBCASE("oblique k, normalization against the 1/2 factor") {
    const SymbolExtraction e = extract_symbol(F, {1, 2}, V);
    const Mat I = Mat::Identity(2, 2);
    const double vx = fiber_inner(V, e.Xi, I, I);
    CHECK(std::abs(vx) > 1.0);
    CHECK(max_abs(e.cos_to_cos - 0.5 * vx * e.Xi) <= 1e-10 * max_abs(e.formula));
  }
  SUBCASE("quartic scaling in k") {
    const SymbolExtraction e1 = extract_symbol(F, {0, 1}, V), e2 = extract_symbol(F, {0, 2}, V);
    CHECK(max_abs(e2.cos_to_cos - 16.0 * e1.cos_to_cos) <= 1e-10 * max_abs(e2.cos_to_cos));
  }
  SUBCASE("J Xi is in the kernel") {
    const Mat X = make_xi(standard_complex(1), Mat::Identity(2, 2), Eigen::Vector2d(1.0, 2.0));
    const SymbolExtraction e = extract_symbol(F, {1, 2}, standard_complex(1) * X);
    CHECK(max_abs(e.cos_to_cos) <= 1e-10);
    CHECK(max_abs(e.sin_to_sin) <= 1e-10);
  }
  SUBCASE("m = 2") {
    const PeriodicGrid g2(2, 8);
    const Geometry F2 = make_geometry(aklab::test::flat_structure(g2));
    const Mat J0 = standard_complex(2), I = Mat::Identity(4, 4);
    const auto basis = tangent_fiber_basis(J0, I, I);
    Mat V2 = Mat::Zero(4, 4);
    for (std::size_t b = 0; b < basis.size(); ++b) V2 += (1.0 + 0.3 * b) * basis[b];
    const SymbolExtraction e = extract_symbol(F2, {1, 2, 0, 1}, V2);
    CHECK(max_abs(e.cos_to_cos - e.formula) <= 1e-10 * max_abs(e.formula));
  }
  SUBCASE("contract violations") {
    CHECK_THROWS(extract_symbol(F, {0, 0}, V));
    CHECK_THROWS(extract_symbol(F, {8, 0}, V));
    const Geometry G = make_geometry(perturbed(g, 6, 2, 0.2));
    CHECK_THROWS(extract_symbol(G, {1, 0}, V));
  }
}

TEST_CASE("curved background: the symbol dominates at high frequency") {
  // 2 JP (JP)^* applied to V(x) cos(l k.x) approaches l^4 (V, Xi) Xi / 2 cos(l k.x) with O(1/l) relative error
  const PeriodicGrid g(1, 64);
  const Geometry G = make_geometry(perturbed(g, 7, 2, 0.1));
  const AKStructure& S = G.J();
  const TangentField V = aklab::test::random_tangent(S, 8, 1, 0.5);
  const std::vector<int> k{1, 1};
  std::vector<double> errs;
  for (int l : {2, 4, 8, 16}) {
    TensorField wave(g, kScalar);
    for (std::size_t p = 0; p < g.size(); ++p) wave(p) = std::cos(l * (k[0] * g.coordinate(p, 0) + k[1] * g.coordinate(p, 1)));
    const TangentField v(S, scale(wave, V.field()));
    const TensorField out = 2.0 * JP(JP_star(v, G), S).field();
    TensorField principal(g, kEndomorphism);
    for (std::size_t p = 0; p < g.size(); ++p) {
      const Fiber f = fiber_at(S, p);
      const Eigen::Vector2d xi(l * k[0], l * k[1]);
      const Eigen::MatrixXd X = make_xi(f.J, f.gi, xi);
      principal.matrix(p) = wave(p) * symbol_formula(Eigen::MatrixXd(V.field().matrix(p)), X, f.g, f.gi);
    }
    errs.push_back(norm(out - principal, S) / norm(principal, S));
  }
  INFO("relative remainder " << errs[0] << " " << errs[1] << " " << errs[2] << " " << errs[3]);
  CHECK(errs[3] < 0.2);
  for (int i = 0; i < 3; ++i) CHECK(errs[i] / errs[i + 1] >= 1.6);
}

TEST_CASE("weak parabolicity") {
  for (int m : {1, 2}) {
    const PeriodicGrid g(m, 8);
    const AKStructure S = perturbed(g, 9, 2, 0.3);
    const ParabolicityResult r = parabolicity_report(S, 500, 10);
    CHECK(r.report.pass);
    CHECK(r.min_quadratic >= -1e-12);
    CHECK(r.fiber_dim == m * (m + 1));
    CHECK(r.kernel_dim == r.fiber_dim - 1);
    CHECK(r.samples == 500);
  }
}

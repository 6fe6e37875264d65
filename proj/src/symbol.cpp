#include "aklab/symbol.hpp"

#include <cmath>
#include <random>
#include <string>

#include "aklab/linalg.hpp"
#include "aklab/spectral.hpp"

namespace aklab {

namespace {

double unit(std::mt19937_64& rng) { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; }

void require_constant(const TensorField& f, const char* what) {
  const Eigen::VectorXd first = f.values().col(0);
  const double spread = (f.values().colwise() - first).cwiseAbs().maxCoeff();
  if (spread > 1e-12 * std::max(1.0, first.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(std::string(what) + ": structure must have constant coefficients");
}

}  // namespace

std::vector<Mat> tangent_fiber_basis(const Mat& J, const Mat& g, const Mat& g_inv) {
  const int m = static_cast<int>(J.rows()) / 2;
  std::vector<Mat> basis;
  for (const auto& e : sp_basis(m)) {
    Mat v = J * e - e * J;
    for (const auto& b : basis) v -= fiber_inner(b, v, g, g_inv) * b;
    const double n2 = fiber_inner(v, v, g, g_inv);
    if (n2 > 1e-20) basis.push_back(v / std::sqrt(n2));
  }
  return basis;
}

SymbolExtraction extract_symbol(const Geometry& G, const std::vector<int>& k, const Mat& V) {
  const AKStructure& J = G.structure;
  const PeriodicGrid& grid = J.grid();
  require_constant(J.J(), "extract_symbol");
  require_constant(J.g(), "extract_symbol");
  if (static_cast<int>(k.size()) != grid.dim()) throw std::invalid_argument("extract_symbol: k must have 2m entries");
  bool nonzero = false;
  for (int kc : k) {
    nonzero |= kc != 0;
    if (2 * std::abs(kc) >= grid.n()) throw std::invalid_argument("extract_symbol: k not resolved on the grid");
  }
  if (!nonzero) throw std::invalid_argument("extract_symbol: k must be nonzero");

  const Mat j0 = J.J().matrix(0), g0 = J.g().matrix(0), gi0 = J.g_inv().matrix(0);
  auto wave = [&](bool sine) {
    return scalar_field(grid, [&](const Vec& x) {
      double t = 0.0;
      for (int a = 0; a < grid.dim(); ++a) t += k[a] * x[a];
      return sine ? std::sin(t) : std::cos(t);
    });
  };
  const TensorField c = wave(false), s = wave(true);
  const TensorField Vfield = constant_matrix_field(grid, kEndomorphism, V);
  // Projects an endomorphism field onto a unit-normalized plane wave.
  auto project = [&](const TensorField& w, const TensorField& basis) {
    const double norm2 = integrate(scale(basis, basis));
    Mat out(grid.dim(), grid.dim());
    for (int a = 0; a < grid.dim(); ++a)
      for (int b = 0; b < grid.dim(); ++b) {
        TensorField comp = w.component(a * grid.dim() + b);
        out(a, b) = integrate(scale(basis, comp)) / norm2;
      }
    return out;
  };
  auto apply = [&](const TensorField& wave_field) {
    const TangentField v(J, scale(wave_field, Vfield));
    return TensorField(2.0 * JP(JP_star(v, G), J).field());
  };
  const TensorField from_cos = apply(c);
  const TensorField from_sin = apply(s);

  SymbolExtraction out;
  out.cos_to_cos = project(from_cos, c);
  out.cos_to_sin = project(from_cos, s);
  out.sin_to_cos = project(from_sin, c);
  out.sin_to_sin = project(from_sin, s);
  Vec xi(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) xi[a] = k[a];
  out.Xi = make_xi(j0, gi0, xi);
  out.formula = symbol_formula(V, out.Xi, g0, gi0);
  return out;
}

ParabolicityResult parabolicity_report(const AKStructure& J, int samples, std::uint64_t seed, double tolerance) {
  if (samples < 1) throw std::invalid_argument("parabolicity_report: need at least one sample");
  const PeriodicGrid& grid = J.grid();
  const int d = grid.dim();
  std::mt19937_64 rng(seed);
  ParabolicityResult out;
  out.samples = samples;
  out.min_quadratic = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const std::size_t p = rng() % grid.size();
    const Mat j = J.J().matrix(p), g = J.g().matrix(p), gi = J.g_inv().matrix(p);
    Vec xi(d);
    do {
      for (int a = 0; a < d; ++a) xi[a] = unit(rng);
    } while (xi.norm() < 1e-3);
    const Mat Xi = make_xi(j, gi, xi);
    const auto basis = tangent_fiber_basis(j, g, gi);
    Mat v = Mat::Zero(d, d);
    for (const auto& b : basis) v += unit(rng) * b;
    const double q = fiber_inner(symbol_formula(v, Xi, g, gi), v, g, gi);
    out.min_quadratic = std::min(out.min_quadratic, q);
    if (i == 0) {
      const int nb = static_cast<int>(basis.size());
      Eigen::MatrixXd action(nb, nb);
      for (int r = 0; r < nb; ++r)
        for (int c = 0; c < nb; ++c) action(r, c) = fiber_inner(basis[r], symbol_formula(basis[c], Xi, g, gi), g, gi);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(action);
      const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
      int rank = 0;
      for (int r = 0; r < nb; ++r) rank += std::abs(eig.eigenvalues()[r]) > 1e-10 * top;
      out.fiber_dim = nb;
      out.kernel_dim = nb - rank;
    }
  }
  const double violation = std::max(0.0, -out.min_quadratic);
  out.report = make_report("symbol_semi_positivity", violation, 0.0, tolerance, grid, false,
                           "principal part of 2JP(JP)^* is (v,Xi)Xi/2; fiber dim " + std::to_string(out.fiber_dim) +
                               ", kernel dim " + std::to_string(out.kernel_dim));
  return out;
}

}  // namespace aklab

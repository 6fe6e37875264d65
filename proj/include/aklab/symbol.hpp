#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aklab/operators.hpp"

namespace aklab {

/// Fiber inner product of endomorphisms, g_ab g^cd u^a_c v^b_d.
template <class DU, class DV, class DG, class DGI>
typename DU::Scalar fiber_inner(const Eigen::MatrixBase<DU>& u, const Eigen::MatrixBase<DV>& v,
                                const Eigen::MatrixBase<DG>& g, const Eigen::MatrixBase<DGI>& g_inv) {
  return u.cwiseProduct(g * v * g_inv).sum();
}

/// Xi = xi^sharp (x) (J xi) + (J xi^sharp) (x) xi, componentwise -xi^d xi_b J^b_c + J^d_b xi^b xi_c.
template <class DJ, class DG, class DX>
Eigen::Matrix<typename DJ::Scalar, Eigen::Dynamic, Eigen::Dynamic> make_xi(const Eigen::MatrixBase<DJ>& J,
                                                                          const Eigen::MatrixBase<DG>& g_inv,
                                                                          const Eigen::MatrixBase<DX>& xi) {
  using Scalar = typename DJ::Scalar;
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (xi.isZero(Scalar(0))) throw std::invalid_argument("make_xi: covector must be nonzero");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> up = g_inv * xi;
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> j_xi = xi.transpose() * J;
  M out = -up * j_xi + (J * up) * xi.transpose();
  return out;
}

/// Rank-one quartic symbol v -> (v, Xi) Xi / 2, the principal part of 2 JP (JP)^* with P = L_X J / 2.
template <class DV, class DX, class DG, class DGI>
Eigen::Matrix<typename DV::Scalar, Eigen::Dynamic, Eigen::Dynamic> symbol_formula(const Eigen::MatrixBase<DV>& v,
                                                                                 const Eigen::MatrixBase<DX>& Xi,
                                                                                 const Eigen::MatrixBase<DG>& g,
                                                                                 const Eigen::MatrixBase<DGI>& g_inv) {
  using Scalar = typename DV::Scalar;
  return (Scalar(0.5) * fiber_inner(v, Xi, g, g_inv)) * Xi;
}

/// Orthonormal basis (fiber inner product) of the tangent fiber {v : vJ + Jv = 0, gv symmetric} at one point,
/// obtained from [J, e] over the sp(2m) basis. Dimension m(m+1).
std::vector<Mat> tangent_fiber_basis(const Mat& J, const Mat& g, const Mat& g_inv);

/// Action of 2 JP (JP)^* on the plane-wave pair V cos(k.x), V sin(k.x) at a constant-coefficient structure.
struct SymbolExtraction {
  Mat cos_to_cos;
  Mat cos_to_sin;
  Mat sin_to_cos;
  Mat sin_to_sin;
  Mat Xi;
  Mat formula;  // symbol_formula(V, Xi)
};

SymbolExtraction extract_symbol(const Geometry& G, const std::vector<int>& k, const Mat& V);

struct ParabolicityResult {
  OperatorReport report;
  double min_quadratic = 0.0;
  int fiber_dim = 0;
  int kernel_dim = 0;
  int samples = 0;
};

/// Samples (x, xi, v) and checks (symbol_formula(v), v) = (v, Xi)^2 / 2 >= 0; reports the kernel dimension of the
/// pointwise symbol at the first sample.
ParabolicityResult parabolicity_report(const AKStructure& J, int samples, std::uint64_t seed,
                                       double tolerance = 1e-12);

}  // namespace aklab

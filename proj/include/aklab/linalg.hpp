#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

namespace aklab {

/// Norm bound beyond which exp would overflow double range.
inline constexpr double kExpNormGuard = 700.0;

/// Matrix exponential by scaling and squaring with Pade approximation.
template <class Derived>
typename Derived::PlainObject matrix_exp(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exp: matrix must be square");
  if (!a.allFinite()) throw std::domain_error("matrix_exp: non-finite entries");
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm > kExpNormGuard) throw std::overflow_error("matrix_exp: norm exceeds overflow guard");
  typename Derived::PlainObject out = a.derived().exp();
  return out;
}

/// Standard symplectic matrix [[0, I], [-I, 0]] on R^{2m}.
template <class Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> standard_symplectic(int m) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> w = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    w(i, m + i) = Scalar(1);
    w(m + i, i) = Scalar(-1);
  }
  return w;
}

/// Standard complex structure [[0, -I], [I, 0]], compatible with the standard symplectic matrix.
template <class Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> standard_complex(int m) {
  return -standard_symplectic<Scalar>(m);
}

/// Residual of a^T W + W a for the standard symplectic W.
template <class Derived>
double sp_residual(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const auto w = standard_symplectic<Scalar>(static_cast<int>(a.rows()) / 2);
  return (a.transpose() * w + w * a).cwiseAbs().maxCoeff();
}

/// Nearest element of sp(2m): W^{-1} sym(W a).
template <class Derived>
typename Derived::PlainObject project_sp(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const int m = static_cast<int>(a.rows()) / 2;
  const auto w = standard_symplectic<Scalar>(m);
  typename Derived::PlainObject wa = w * a;
  typename Derived::PlainObject sym = Scalar(0.5) * (wa + wa.transpose());
  typename Derived::PlainObject out = -w * sym;
  return out;
}

/// Basis of sp(2m) as block matrices [[A, B], [C, -A^T]]: symmetric B entries (i <= j, row-major),
/// then symmetric C entries, then A entries (row-major). Dimension 2m^2 + m.
std::vector<Eigen::MatrixXd> sp_basis(int m);

}  // namespace aklab

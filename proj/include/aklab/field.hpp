#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>

#include "aklab/grid.hpp"

namespace aklab {

/// Tensor type (p, q): p upper slots followed by q lower slots.
struct Rank {
  int upper = 0;
  int lower = 0;

  int order() const { return upper + lower; }
  friend bool operator==(const Rank&, const Rank&) = default;
};

inline constexpr Rank kScalar{0, 0};
inline constexpr Rank kVector{1, 0};
inline constexpr Rank kCovector{0, 1};
inline constexpr Rank kEndomorphism{1, 1};
inline constexpr Rank kBilinear{0, 2};
inline constexpr Rank kBivector{2, 0};
inline constexpr Rank kConnection{1, 2};

std::string to_string(Rank r);

// Small dense types that never touch the heap for d <= 4.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 4, 4>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
using MatMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstMatMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

/// Real tensor field sampled on a periodic grid.
///
/// Components of one point are stored contiguously. Component indices run
/// row-major over (upper..., lower...), so an endomorphism v^a_b sits at a*d + b
/// and maps onto a row-major d x d matrix whose row is the upper index.
class TensorField {
 public:
  TensorField(const PeriodicGrid& grid, Rank rank);
  TensorField(const PeriodicGrid& grid, Rank rank, Eigen::MatrixXd values);

  const PeriodicGrid& grid() const { return grid_; }
  Rank rank() const { return rank_; }
  int dim() const { return grid_.dim(); }
  int components() const { return static_cast<int>(values_.rows()); }
  std::size_t points() const { return grid_.size(); }

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }

  double operator()(std::size_t point, int comp = 0) const { return values_(comp, static_cast<Eigen::Index>(point)); }
  double& operator()(std::size_t point, int comp = 0) { return values_(comp, static_cast<Eigen::Index>(point)); }

  const double* data(std::size_t point) const { return values_.col(static_cast<Eigen::Index>(point)).data(); }
  double* data(std::size_t point) { return values_.col(static_cast<Eigen::Index>(point)).data(); }

  /// d x d view of an order-2 tensor at one point.
  ConstMatMap matrix(std::size_t point) const;
  MatMap matrix(std::size_t point);

  /// Length-d view of an order-1 tensor at one point.
  ConstVecMap vector(std::size_t point) const;
  VecMap vector(std::size_t point);

  /// Component c as a scalar field.
  TensorField component(int c) const;
  void set_component(int c, const TensorField& scalar);

  bool all_finite() const;
  void require_finite(const std::string& what) const;
  double max_abs() const;

  TensorField& operator+=(const TensorField& o);
  TensorField& operator-=(const TensorField& o);
  TensorField& operator*=(double s);

 private:
  PeriodicGrid grid_;
  Rank rank_;
  Eigen::MatrixXd values_;
};

void require_same_grid(const TensorField& a, const TensorField& b, const char* what);
void require_rank(const TensorField& f, Rank r, const char* what);

TensorField operator+(TensorField a, const TensorField& b);
TensorField operator-(TensorField a, const TensorField& b);
TensorField operator-(TensorField a);
TensorField operator*(double s, TensorField a);
TensorField operator*(TensorField a, double s);

/// Pointwise product of a scalar field with any tensor field.
TensorField scale(const TensorField& scalar, const TensorField& t);

/// Pointwise product of order-2 fields, contracting the second slot of a with the first slot of b.
TensorField compose(const TensorField& a, const TensorField& b, Rank result);
TensorField compose(const TensorField& a, const TensorField& b);

/// Pointwise commutator of endomorphism fields.
TensorField commutator(const TensorField& a, const TensorField& b);

/// Pointwise trace of an order-2 field.
TensorField trace(const TensorField& a);

/// Constant field equal to the given components at every point.
TensorField constant_field(const PeriodicGrid& grid, Rank rank, const Eigen::VectorXd& comps);
TensorField constant_matrix_field(const PeriodicGrid& grid, Rank rank, const Mat& m);

/// Scalar field from a function of the coordinates.
template <class Fn>
TensorField scalar_field(const PeriodicGrid& grid, Fn&& fn) {
  TensorField f(grid, kScalar);
  Vec x(grid.dim());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(p, a);
    f(p) = fn(x);
  }
  return f;
}

int power(int base, int exp);

}  // namespace aklab

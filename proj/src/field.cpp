#include "aklab/field.hpp"

#include <cmath>
#include <stdexcept>

namespace aklab {

std::string to_string(Rank r) { return "(" + std::to_string(r.upper) + "," + std::to_string(r.lower) + ")"; }

int power(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

TensorField::TensorField(const PeriodicGrid& grid, Rank rank)
    : grid_(grid), rank_(rank), values_(Eigen::MatrixXd::Zero(power(grid.dim(), rank.order()), static_cast<Eigen::Index>(grid.size()))) {
  if (rank.upper < 0 || rank.lower < 0) throw std::invalid_argument("field: negative rank");
}

TensorField::TensorField(const PeriodicGrid& grid, Rank rank, Eigen::MatrixXd values)
    : grid_(grid), rank_(rank), values_(std::move(values)) {
  if (values_.rows() != power(grid.dim(), rank.order()) || values_.cols() != static_cast<Eigen::Index>(grid.size()))
    throw std::invalid_argument("field: storage shape does not match grid and rank " + to_string(rank));
}

ConstMatMap TensorField::matrix(std::size_t point) const {
  if (rank_.order() != 2) throw std::logic_error("field: matrix view needs an order-2 tensor");
  return ConstMatMap(data(point), dim(), dim());
}

MatMap TensorField::matrix(std::size_t point) {
  if (rank_.order() != 2) throw std::logic_error("field: matrix view needs an order-2 tensor");
  return MatMap(data(point), dim(), dim());
}

ConstVecMap TensorField::vector(std::size_t point) const {
  if (rank_.order() != 1) throw std::logic_error("field: vector view needs an order-1 tensor");
  return ConstVecMap(data(point), dim());
}

VecMap TensorField::vector(std::size_t point) {
  if (rank_.order() != 1) throw std::logic_error("field: vector view needs an order-1 tensor");
  return VecMap(data(point), dim());
}

TensorField TensorField::component(int c) const {
  if (c < 0 || c >= components()) throw std::out_of_range("field: component index");
  TensorField out(grid_, kScalar);
  out.values_.row(0) = values_.row(c);
  return out;
}

void TensorField::set_component(int c, const TensorField& scalar) {
  if (c < 0 || c >= components()) throw std::out_of_range("field: component index");
  require_same_grid(*this, scalar, "set_component");
  require_rank(scalar, kScalar, "set_component");
  values_.row(c) = scalar.values_.row(0);
}

bool TensorField::all_finite() const { return values_.allFinite(); }

void TensorField::require_finite(const std::string& what) const {
  if (!all_finite()) throw std::domain_error(what + ": non-finite values in input field");
}

double TensorField::max_abs() const { return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff(); }

TensorField& TensorField::operator+=(const TensorField& o) {
  require_same_grid(*this, o, "operator+=");
  require_rank(o, rank_, "operator+=");
  values_ += o.values_;
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
  require_same_grid(*this, o, "operator-=");
  require_rank(o, rank_, "operator-=");
  values_ -= o.values_;
  return *this;
}

TensorField& TensorField::operator*=(double s) {
  values_ *= s;
  return *this;
}

void require_same_grid(const TensorField& a, const TensorField& b, const char* what) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

void require_rank(const TensorField& f, Rank r, const char* what) {
  if (!(f.rank() == r))
    throw std::invalid_argument(std::string(what) + ": expected rank " + to_string(r) + ", got " + to_string(f.rank()));
}

TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
TensorField operator-(TensorField a) { return a *= -1.0; }
TensorField operator*(double s, TensorField a) { return a *= s; }
TensorField operator*(TensorField a, double s) { return a *= s; }

TensorField scale(const TensorField& scalar, const TensorField& t) {
  require_same_grid(scalar, t, "scale");
  require_rank(scalar, kScalar, "scale");
  TensorField out = t;
  for (std::size_t p = 0; p < t.points(); ++p) out.values().col(p) *= scalar(p);
  return out;
}

TensorField compose(const TensorField& a, const TensorField& b, Rank result) {
  require_same_grid(a, b, "compose");
  if (a.rank().order() != 2 || b.rank().order() != 2 || result.order() != 2)
    throw std::invalid_argument("compose: order-2 fields required");
  TensorField out(a.grid(), result);
  for (std::size_t p = 0; p < a.points(); ++p) out.matrix(p).noalias() = a.matrix(p) * b.matrix(p);
  return out;
}

TensorField compose(const TensorField& a, const TensorField& b) {
  const int first_upper = a.rank().upper >= 1 ? 1 : 0;
  const int second_upper = b.rank().upper >= 2 ? 1 : 0;
  return compose(a, b, Rank{first_upper + second_upper, 2 - first_upper - second_upper});
}

TensorField commutator(const TensorField& a, const TensorField& b) {
  require_rank(a, kEndomorphism, "commutator");
  require_rank(b, kEndomorphism, "commutator");
  require_same_grid(a, b, "commutator");
  TensorField out(a.grid(), kEndomorphism);
  for (std::size_t p = 0; p < a.points(); ++p) {
    auto x = a.matrix(p);
    auto y = b.matrix(p);
    out.matrix(p).noalias() = x * y - y * x;
  }
  return out;
}

TensorField trace(const TensorField& a) {
  TensorField out(a.grid(), kScalar);
  for (std::size_t p = 0; p < a.points(); ++p) out(p) = a.matrix(p).trace();
  return out;
}

TensorField constant_field(const PeriodicGrid& grid, Rank rank, const Eigen::VectorXd& comps) {
  TensorField out(grid, rank);
  if (comps.size() != out.components()) throw std::invalid_argument("constant_field: component count mismatch");
  out.values().colwise() = comps;
  return out;
}

TensorField constant_matrix_field(const PeriodicGrid& grid, Rank rank, const Mat& m) {
  Eigen::VectorXd comps(m.size());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) comps[i * m.cols() + j] = m(i, j);
  return constant_field(grid, rank, comps);
}

}  // namespace aklab

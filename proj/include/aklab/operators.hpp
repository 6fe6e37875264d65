#pragma once

#include <string>

#include "aklab/curvature.hpp"

namespace aklab {

/// Floor for relative residuals: relative = absolute / max(reference, floor).
inline constexpr double kRelativeFloor = 1e-14;

/// Outcome of one numerical check.
struct OperatorReport {
  std::string name;
  double absolute = 0.0;
  double reference = 0.0;
  double relative = 0.0;
  double tolerance = 0.0;
  bool relative_test = true;
  bool pass = false;
  int m = 0;
  int n = 0;
  std::string note;
};

/// Builds a report; pass compares the relative residual (or the absolute one) against tol.
OperatorReport make_report(std::string name, double absolute, double reference, double tol, const PeriodicGrid& grid,
                           bool relative_test = true, std::string note = {});

struct ComplexScalarField {
  TensorField re;
  TensorField im;
};

/// L2 pairing with full metric contraction of every slot.
double inner(const TensorField& u, const TensorField& v, const AKStructure& J);
/// Integral of tr(uv) for endomorphism fields.
double trace_inner(const TensorField& u, const TensorField& v);
/// L2 norm sqrt(<u,u>).
double norm(const TensorField& u, const AKStructure& J);

/// Lie derivative of an endomorphism field along a vector field.
TensorField lie_derivative(const TensorField& X, const TensorField& v);

TangentField P(const TensorField& f, const AKStructure& J);
TangentField JP(const TensorField& f, const AKStructure& J);

TensorField P_star(const TangentField& v, const Geometry& G);
TensorField JP_star(const TangentField& v, const Geometry& G);

/// J v as a tangent field at the same base.
TangentField apply_J(const TangentField& v, const AKStructure& J);

/// Derivative of the Hermitian scalar curvature along v.
TensorField variation_s(const TangentField& v, const Geometry& G);
/// Derivative of the Calabi functional along v.
double variation_C(const TangentField& v, const Geometry& G);

TensorField lichnerowicz(const TensorField& f, const Geometry& G);
/// Curvature expansion of the Lichnerowicz operator.
TensorField lichnerowicz_explicit(const TensorField& f, const Geometry& G);

/// Positive Laplacian delta d on scalars.
TensorField laplacian(const TensorField& f, const Geometry& G);

TensorField lie_K_scalar(const TensorField& f, const Geometry& G);
TensorField lie_K_tangent(const TensorField& v, const Geometry& G);

ComplexScalarField calabi_plus(const ComplexScalarField& F, const Geometry& G);
ComplexScalarField calabi_minus(const ComplexScalarField& F, const Geometry& G);

/// L_K J, the derivative of J along the extremal vector field.
TensorField lie_K_J(const Geometry& G);

TensorField H(const TangentField& v, const Geometry& G);
TensorField H_tilde(const TangentField& v, const Geometry& G);

/// Integral of the squared Hermitian scalar curvature.
double calabi_functional(const Geometry& G);
double calabi_functional(const AKStructure& J);

}  // namespace aklab

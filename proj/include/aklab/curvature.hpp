#pragma once

#include <optional>

#include "aklab/field.hpp"
#include "aklab/structure.hpp"

namespace aklab {

/// Connection coefficients of a structure. Rank (1,2) fields with component k d^2 + i d + j,
/// read as the matrix of the connection along direction i: nabla_{d_i} d_j = C^k_{ij} d_k.
struct ConnectionData {
  TensorField christoffel;  // Levi-Civita, symmetric in i, j
  TensorField hermitian;    // Gamma_i - J (D_i J) / 2
  TensorField DJ;           // (D_i J)^k_j
};

ConnectionData christoffel(const AKStructure& J);

/// Matrix of a connection field along direction i at one point.
Mat connection_matrix(const TensorField& conn, std::size_t point, int i);

/// Covariant derivative along coordinate direction i; same rank as T.
TensorField covariant_derivative_along(const TensorField& T, const TensorField& conn, int i);

/// Full covariant derivative; the derivative index becomes the first lower slot.
TensorField covariant_derivative(const TensorField& T, const TensorField& conn);

/// Divergence -g^{ij} (D_i T)_{j...} over the first lower slot, Levi-Civita connection.
TensorField delta(const TensorField& T, const AKStructure& J, const ConnectionData& conn);

/// Curvature of a connection field along (d_i, d_j) as an endomorphism, in the convention
/// R(X,Y) = D_{[X,Y]} - [D_X, D_Y], i.e. -(d_i C_j - d_j C_i + [C_i, C_j]).
TensorField curvature_operator(const TensorField& conn, int i, int j);

/// All curvature quantities of a structure.
///
/// Two-forms and bilinear forms are (0,2) fields with component i d + j. The Riemann tensor, when kept,
/// is a (1,3) field with component ((k d + i) d + j) d + l holding R(d_i, d_j)^k_l.
struct CurvatureBundle {
  std::optional<TensorField> riemann;
  TensorField ricci;
  TensorField ricci_plus;
  TensorField rho;
  TensorField rho_star;
  TensorField rho_hermitian;
  TensorField scalar;
  TensorField hermitian_scalar;
  double mean_hermitian_scalar = 0.0;
  TensorField K;
};

CurvatureBundle curvature_bundle(const AKStructure& J, const ConnectionData& conn, bool keep_riemann = true);

/// Pointwise inner product of 2-forms, (a, b) = a_ij b_kl g^ik g^jl / 2.
TensorField two_form_inner(const TensorField& a, const TensorField& b, const AKStructure& J);

/// Constant symplectic form as a (0,2) field.
TensorField symplectic_form_field(const PeriodicGrid& grid);

/// Exterior derivative of a one-form: (d alpha)_ij = d_i alpha_j - d_j alpha_i.
TensorField exterior_derivative(const TensorField& alpha);

/// Structure together with its connection and curvature, computed eagerly.
struct Geometry {
  AKStructure structure;
  ConnectionData connection;
  CurvatureBundle curvature;

  const AKStructure& J() const { return structure; }
  const PeriodicGrid& grid() const { return structure.grid(); }
};

Geometry make_geometry(AKStructure J, bool keep_riemann = false);

}  // namespace aklab

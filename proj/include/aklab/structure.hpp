#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "aklab/field.hpp"

namespace aklab {

/// One Fourier record of a potential: (cos_amp cos(k.x) + sin_amp sin(k.x)) times sp basis element `basis`.
struct PotentialMode {
  std::vector<int> k;
  int basis = 0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

/// Endomorphism field with values in sp(2m): a^T W + W a = 0 at every point.
class SpPotential {
 public:
  explicit SpPotential(TensorField a, double tol = 1e-12);

  static SpPotential zero(const PeriodicGrid& grid);
  static SpPotential from_modes(const PeriodicGrid& grid, const std::vector<PotentialMode>& modes);
  /// Random band-limited endomorphism field projected onto sp(2m).
  static SpPotential random(const PeriodicGrid& grid, std::uint64_t seed, int cutoff, double amplitude);

  const TensorField& field() const { return a_; }
  const PeriodicGrid& grid() const { return a_.grid(); }

 private:
  TensorField a_;
};

struct StructureResiduals {
  double square = 0.0;        // max |J^2 + I|
  double compatibility = 0.0; // max |J^T W J - W|
  double metric = 0.0;        // max |g - W J|
  double min_eig_g = 0.0;
};

/// omega-compatible almost complex structure J with its metric g = W J.
///
/// Held through a symplectic frame S with J = S^{-1} J0 S, so that compatibility is exact
/// up to rounding for every structure the library builds.
class AKStructure {
 public:
  static AKStructure from_frame(TensorField frame, std::optional<SpPotential> generator = std::nullopt);
  /// Bypasses every invariant; only for negative controls in tests.
  static AKStructure unchecked(TensorField J, TensorField g);

  const PeriodicGrid& grid() const { return J_.grid(); }
  int m() const { return grid().m(); }
  int dim() const { return grid().dim(); }
  std::uint64_t id() const { return id_; }

  const TensorField& J() const { return J_; }
  const TensorField& g() const { return g_; }
  const TensorField& g_inv() const { return g_inv_; }
  const TensorField& frame() const { return frame_; }
  const std::optional<SpPotential>& generator() const { return generator_; }

  StructureResiduals residuals() const;

 private:
  AKStructure(TensorField frame, TensorField J, TensorField g, TensorField g_inv, std::optional<SpPotential> gen);

  TensorField frame_;
  TensorField J_;
  TensorField g_;
  TensorField g_inv_;
  std::optional<SpPotential> generator_;
  std::uint64_t id_;
};

StructureResiduals structure_residuals(const TensorField& J, const TensorField& g);

/// J = exp(-a) J0 exp(a) pointwise.
AKStructure make_structure(const SpPotential& a);

/// Frame S exp(x) for an sp(2m)-valued field x, i.e. J -> exp(-x) J exp(x).
AKStructure deform(const AKStructure& J, const TensorField& x);

/// Tangent vector of the space of compatible structures at a fixed base.
class TangentField {
 public:
  /// Validates anti-commutation with J and g-symmetry; tol is relative to max |v|.
  TangentField(const AKStructure& base, TensorField v, double tol = 1e-6);
  /// Skips validation for fields that are tangent by construction.
  static TangentField trusted(const AKStructure& base, TensorField v);

  const TensorField& field() const { return v_; }
  std::uint64_t base_id() const { return base_id_; }

 private:
  TangentField(std::uint64_t base, TensorField v) : v_(std::move(v)), base_id_(base) {}
  TensorField v_;
  std::uint64_t base_id_;
};

void require_based_at(const TangentField& v, const AKStructure& J, const char* what);

struct TangentResiduals {
  double anticommutation = 0.0;  // max |vJ + Jv|
  double symmetry = 0.0;         // max |gv - (gv)^T|
};

TangentResiduals tangent_residuals(const TensorField& v, const AKStructure& J);

/// a = a_plus + a_minus with a_plus commuting and a_minus anti-commuting with J.
std::pair<TensorField, TensorField> split_by_J(const TensorField& a, const AKStructure& J);

/// sp(2m) generator a = -J v / 2 (projected onto sp(2m)), so that [J, a] = v.
TensorField tangent_generator(const AKStructure& J, const TensorField& v);

/// exp(-t a) J exp(t a) with a = -J v / 2.
AKStructure retract(const AKStructure& J, const TangentField& v, double t);

/// Nijenhuis tensor N^k_{ij}, component k d^2 + i d + j.
TensorField nijenhuis(const AKStructure& J);

/// Metric gradient g^{-1} df.
TensorField grad(const TensorField& f, const AKStructure& J);
/// Symplectic gradient J grad f.
TensorField grad_omega(const TensorField& f, const AKStructure& J);
/// Poisson tensor g^{kj} J^i_k, component i d + j.
TensorField poisson_tensor(const AKStructure& J);
/// (d^c f)_i = -J^k_i d_k f.
TensorField d_c(const TensorField& f, const AKStructure& J);
/// {f, h} = (grad_omega f)(h).
TensorField poisson(const TensorField& f, const TensorField& h, const AKStructure& J);

/// Exterior derivative of a scalar.
TensorField d(const TensorField& f);
/// Directional derivative X^i d_i f.
TensorField apply_vector(const TensorField& X, const TensorField& f);
/// Index lowering g X and raising g^{-1} alpha for order-1 fields.
TensorField flat(const TensorField& X, const AKStructure& J);
TensorField sharp(const TensorField& alpha, const AKStructure& J);
/// J acting on a one-form: (J alpha)(X) = -alpha(J X).
TensorField complex_one_form(const TensorField& alpha, const AKStructure& J);

}  // namespace aklab

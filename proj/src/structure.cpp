#include "aklab/structure.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aklab/linalg.hpp"
#include "aklab/spectral.hpp"

namespace aklab {

namespace {

std::uint64_t next_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

// Compatibility tolerances scale with the conditioning of the frame.
constexpr double kStructureTol = 1e-12;

}  // namespace

SpPotential::SpPotential(TensorField a, double tol) : a_(std::move(a)) {
  require_rank(a_, kEndomorphism, "SpPotential");
  a_.require_finite("SpPotential");
  for (std::size_t p = 0; p < a_.points(); ++p) {
    const Mat x = a_.matrix(p);
    if (sp_residual(x) > tol * std::max(1.0, x.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("SpPotential: value outside sp(2m) at point " + std::to_string(p));
  }
}

SpPotential SpPotential::zero(const PeriodicGrid& grid) { return SpPotential(TensorField(grid, kEndomorphism)); }

SpPotential SpPotential::from_modes(const PeriodicGrid& grid, const std::vector<PotentialMode>& modes) {
  const auto basis = sp_basis(grid.m());
  TensorField a(grid, kEndomorphism);
  for (const auto& mode : modes) {
    if (static_cast<int>(mode.k.size()) != grid.dim())
      throw std::invalid_argument("SpPotential: wavevector length must be 2m");
    if (mode.basis < 0 || mode.basis >= static_cast<int>(basis.size()))
      throw std::invalid_argument("SpPotential: sp basis index out of range");
    for (int kc : mode.k)
      if (3 * std::abs(kc) > grid.n()) throw std::invalid_argument("SpPotential: mode exceeds cutoff n/3");
    const Mat e = basis[mode.basis];
    for (std::size_t p = 0; p < grid.size(); ++p) {
      double phase = 0.0;
      for (int ax = 0; ax < grid.dim(); ++ax) phase += mode.k[ax] * grid.coordinate(p, ax);
      a.matrix(p) += (mode.cos_amp * std::cos(phase) + mode.sin_amp * std::sin(phase)) * e;
    }
  }
  return SpPotential(std::move(a));
}

SpPotential SpPotential::random(const PeriodicGrid& grid, std::uint64_t seed, int cutoff, double amplitude) {
  TensorField a = random_band_limited(grid, seed, cutoff, amplitude, kEndomorphism);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Mat x = a.matrix(p);
    a.matrix(p) = project_sp(x);
  }
  return SpPotential(std::move(a));
}

AKStructure::AKStructure(TensorField frame, TensorField J, TensorField g, TensorField g_inv,
                         std::optional<SpPotential> gen)
    : frame_(std::move(frame)),
      J_(std::move(J)),
      g_(std::move(g)),
      g_inv_(std::move(g_inv)),
      generator_(std::move(gen)),
      id_(next_id()) {}

AKStructure AKStructure::from_frame(TensorField frame, std::optional<SpPotential> generator) {
  require_rank(frame, kEndomorphism, "AKStructure");
  frame.require_finite("AKStructure");
  const PeriodicGrid& grid = frame.grid();
  const int m = grid.m();
  const Mat w = standard_symplectic(m);
  const Mat j0 = standard_complex(m);
  TensorField J(grid, kEndomorphism), g(grid, kBilinear), g_inv(grid, kBivector);
  double worst = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Mat s = frame.matrix(p);
    const Mat s_inv = -w * s.transpose() * w;
    const Mat j = s_inv * j0 * s;
    const Mat metric = s.transpose() * s;
    J.matrix(p) = j;
    g.matrix(p) = metric;
    g_inv.matrix(p) = s_inv * s_inv.transpose();
    const double cond = std::max(1.0, s.cwiseAbs().maxCoeff() * s_inv.cwiseAbs().maxCoeff());
    const double frame_res = (s.transpose() * w * s - w).cwiseAbs().maxCoeff() / (cond * cond);
    worst = std::max(worst, frame_res);
    if (metric.llt().info() != Eigen::Success)
      throw std::domain_error("AKStructure: metric is not positive definite at point " + std::to_string(p));
  }
  if (worst > 1e3 * kStructureTol) throw std::domain_error("AKStructure: frame is not symplectic");
  AKStructure out(std::move(frame), std::move(J), std::move(g), std::move(g_inv), std::move(generator));
  const auto r = out.residuals();
  const double scale = std::max(1.0, out.g_.max_abs() * out.g_inv_.max_abs());
  if (r.square > kStructureTol * scale || r.compatibility > kStructureTol * scale * scale ||
      r.metric > kStructureTol * scale || !(r.min_eig_g > 0.0))
    throw std::domain_error("AKStructure: compatibility invariants violated (J^2+I " + std::to_string(r.square) +
                            ", J^T W J - W " + std::to_string(r.compatibility) + ")");
  return out;
}

AKStructure AKStructure::unchecked(TensorField J, TensorField g) {
  require_rank(J, kEndomorphism, "AKStructure::unchecked");
  require_rank(g, kBilinear, "AKStructure::unchecked");
  TensorField g_inv(g.grid(), kBivector);
  for (std::size_t p = 0; p < g.points(); ++p) g_inv.matrix(p) = Mat(g.matrix(p)).inverse();
  TensorField frame(g.grid(), kEndomorphism);
  return AKStructure(std::move(frame), std::move(J), std::move(g), std::move(g_inv), std::nullopt);
}

StructureResiduals structure_residuals(const TensorField& J, const TensorField& g) {
  const int m = J.grid().m();
  const Mat w = standard_symplectic(m);
  const Mat id = Mat::Identity(2 * m, 2 * m);
  StructureResiduals r;
  r.min_eig_g = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < J.points(); ++p) {
    const Mat j = J.matrix(p);
    const Mat metric = g.matrix(p);
    r.square = std::max(r.square, (j * j + id).cwiseAbs().maxCoeff());
    r.compatibility = std::max(r.compatibility, (j.transpose() * w * j - w).cwiseAbs().maxCoeff());
    r.metric = std::max(r.metric, (metric - w * j).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat> eig(metric, Eigen::EigenvaluesOnly);
    r.min_eig_g = std::min(r.min_eig_g, eig.eigenvalues().minCoeff());
  }
  return r;
}

StructureResiduals AKStructure::residuals() const { return structure_residuals(J_, g_); }

AKStructure make_structure(const SpPotential& a) {
  const PeriodicGrid& grid = a.grid();
  TensorField frame(grid, kEndomorphism);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Mat x = a.field().matrix(p);
    frame.matrix(p) = matrix_exp(x);
  }
  return AKStructure::from_frame(std::move(frame), a);
}

AKStructure deform(const AKStructure& J, const TensorField& x) {
  require_same_grid(J.J(), x, "deform");
  require_rank(x, kEndomorphism, "deform");
  TensorField frame(J.grid(), kEndomorphism);
  for (std::size_t p = 0; p < J.grid().size(); ++p) {
    const Mat step = x.matrix(p);
    frame.matrix(p) = Mat(J.frame().matrix(p)) * matrix_exp(step);
  }
  return AKStructure::from_frame(std::move(frame));
}

TangentField::TangentField(const AKStructure& base, TensorField v, double tol) : v_(std::move(v)), base_id_(base.id()) {
  require_rank(v_, kEndomorphism, "TangentField");
  require_same_grid(v_, base.J(), "TangentField");
  v_.require_finite("TangentField");
  const auto r = tangent_residuals(v_, base);
  const double scale = std::max(1.0, v_.max_abs()) * std::max(1.0, base.g().max_abs());
  if (r.anticommutation > tol * scale || r.symmetry > tol * scale)
    throw std::invalid_argument("TangentField: not tangent (vJ+Jv " + std::to_string(r.anticommutation) +
                                ", gv-(gv)^T " + std::to_string(r.symmetry) + ")");
}

TangentField TangentField::trusted(const AKStructure& base, TensorField v) {
  require_rank(v, kEndomorphism, "TangentField");
  require_same_grid(v, base.J(), "TangentField");
  return TangentField(base.id(), std::move(v));
}

void require_based_at(const TangentField& v, const AKStructure& J, const char* what) {
  if (v.base_id() != J.id()) throw std::invalid_argument(std::string(what) + ": tangent field is based at another structure");
}

TangentResiduals tangent_residuals(const TensorField& v, const AKStructure& J) {
  TangentResiduals r;
  for (std::size_t p = 0; p < v.points(); ++p) {
    const Mat x = v.matrix(p);
    const Mat j = J.J().matrix(p);
    const Mat gv = J.g().matrix(p) * x;
    r.anticommutation = std::max(r.anticommutation, (x * j + j * x).cwiseAbs().maxCoeff());
    r.symmetry = std::max(r.symmetry, (gv - gv.transpose()).cwiseAbs().maxCoeff());
  }
  return r;
}

std::pair<TensorField, TensorField> split_by_J(const TensorField& a, const AKStructure& J) {
  TensorField plus(a.grid(), kEndomorphism), minus(a.grid(), kEndomorphism);
  for (std::size_t p = 0; p < a.points(); ++p) {
    const Mat x = a.matrix(p);
    const Mat j = J.J().matrix(p);
    const Mat jxj = j * x * j;
    plus.matrix(p) = 0.5 * (x - jxj);
    minus.matrix(p) = 0.5 * (x + jxj);
  }
  return {std::move(plus), std::move(minus)};
}

TensorField tangent_generator(const AKStructure& J, const TensorField& v) {
  TensorField a(J.grid(), kEndomorphism);
  for (std::size_t p = 0; p < a.points(); ++p) {
    const Mat x = -0.5 * Mat(J.J().matrix(p)) * Mat(v.matrix(p));
    a.matrix(p) = project_sp(x);
  }
  return a;
}

AKStructure retract(const AKStructure& J, const TangentField& v, double t) {
  require_based_at(v, J, "retract");
  return deform(J, t * tangent_generator(J, v.field()));
}

TensorField nijenhuis(const AKStructure& J) {
  const int d = J.dim();
  const auto dJ = spectral_gradient(J.J());
  TensorField N(J.grid(), kConnection);
  for (std::size_t p = 0; p < N.points(); ++p) {
    const auto j = J.J().matrix(p);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int jj = 0; jj < d; ++jj) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) {
            s += j(l, i) * dJ[l].matrix(p)(k, jj) - j(l, jj) * dJ[l].matrix(p)(k, i);
            s += -j(k, l) * dJ[i].matrix(p)(l, jj) + j(k, l) * dJ[jj].matrix(p)(l, i);
          }
          N(p, (k * d + i) * d + jj) = 0.25 * s;
        }
  }
  return N;
}

TensorField d(const TensorField& f) {
  require_rank(f, kScalar, "d");
  const auto parts = spectral_gradient(f);
  TensorField out(f.grid(), kCovector);
  for (int i = 0; i < f.dim(); ++i) out.values().row(i) = parts[i].values().row(0);
  return out;
}

TensorField apply_vector(const TensorField& X, const TensorField& f) {
  require_rank(X, kVector, "apply_vector");
  const TensorField df = d(f);
  TensorField out(f.grid(), kScalar);
  for (std::size_t p = 0; p < out.points(); ++p) out(p) = X.vector(p).dot(df.vector(p));
  return out;
}

TensorField flat(const TensorField& X, const AKStructure& J) {
  require_rank(X, kVector, "flat");
  TensorField out(X.grid(), kCovector);
  for (std::size_t p = 0; p < out.points(); ++p) out.vector(p) = J.g().matrix(p) * X.vector(p);
  return out;
}

TensorField sharp(const TensorField& alpha, const AKStructure& J) {
  require_rank(alpha, kCovector, "sharp");
  TensorField out(alpha.grid(), kVector);
  for (std::size_t p = 0; p < out.points(); ++p) out.vector(p) = J.g_inv().matrix(p) * alpha.vector(p);
  return out;
}

TensorField complex_one_form(const TensorField& alpha, const AKStructure& J) {
  require_rank(alpha, kCovector, "complex_one_form");
  TensorField out(alpha.grid(), kCovector);
  for (std::size_t p = 0; p < out.points(); ++p) out.vector(p) = -J.J().matrix(p).transpose() * alpha.vector(p);
  return out;
}

TensorField grad(const TensorField& f, const AKStructure& J) { return sharp(d(f), J); }

TensorField grad_omega(const TensorField& f, const AKStructure& J) {
  const TensorField X = grad(f, J);
  TensorField out(f.grid(), kVector);
  for (std::size_t p = 0; p < out.points(); ++p) out.vector(p) = J.J().matrix(p) * X.vector(p);
  return out;
}

TensorField poisson_tensor(const AKStructure& J) { return compose(J.J(), J.g_inv(), kBivector); }

TensorField d_c(const TensorField& f, const AKStructure& J) { return complex_one_form(d(f), J); }

TensorField poisson(const TensorField& f, const TensorField& h, const AKStructure& J) {
  return apply_vector(grad_omega(f, J), h);
}

}  // namespace aklab

#include "aklab/curvature.hpp"

#include <stdexcept>
#include <vector>

#include "aklab/linalg.hpp"
#include "aklab/spectral.hpp"

namespace aklab {

namespace {

void set_connection_matrix(TensorField& conn, std::size_t p, int i, const Mat& m) {
  const int d = conn.dim();
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) conn(p, (k * d + i) * d + j) = m(k, j);
}

// Endomorphism field of the connection along direction i.
TensorField direction_field(const TensorField& conn, int i) {
  TensorField out(conn.grid(), kEndomorphism);
  for (std::size_t p = 0; p < out.points(); ++p) out.matrix(p) = connection_matrix(conn, p, i);
  return out;
}

}  // namespace

Mat connection_matrix(const TensorField& conn, std::size_t point, int i) {
  const int d = conn.dim();
  Mat m(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) m(k, j) = conn(point, (k * d + i) * d + j);
  return m;
}

ConnectionData christoffel(const AKStructure& J) {
  const PeriodicGrid& grid = J.grid();
  const int d = grid.dim();
  J.g().require_finite("christoffel");
  const auto dg = spectral_gradient(J.g());
  TensorField gamma(grid, kConnection);
  Mat lowered(d, d);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto ginv = J.g_inv().matrix(p);
    for (int i = 0; i < d; ++i) {
      // lowered(l, j) = (d_i g_jl + d_j g_il - d_l g_ij) / 2
      for (int l = 0; l < d; ++l)
        for (int j = 0; j < d; ++j)
          lowered(l, j) = 0.5 * (dg[i].matrix(p)(j, l) + dg[j].matrix(p)(i, l) - dg[l].matrix(p)(i, j));
      set_connection_matrix(gamma, p, i, ginv * lowered);
    }
  }
  const auto dJ = spectral_gradient(J.J());
  TensorField DJ(grid, kConnection), herm(grid, kConnection);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Mat j = J.J().matrix(p);
    for (int i = 0; i < d; ++i) {
      const Mat gi = connection_matrix(gamma, p, i);
      const Mat dji = Mat(dJ[i].matrix(p)) + gi * j - j * gi;
      set_connection_matrix(DJ, p, i, dji);
      set_connection_matrix(herm, p, i, gi - 0.5 * j * dji);
    }
  }
  return {std::move(gamma), std::move(herm), std::move(DJ)};
}

TensorField covariant_derivative_along(const TensorField& T, const TensorField& conn, int i) {
  require_same_grid(T, conn, "covariant_derivative");
  require_rank(conn, kConnection, "covariant_derivative");
  const int d = T.dim();
  const int order = T.rank().order();
  TensorField out = spectral_partial(T, i);
  if (order == 0) return out;
  std::vector<int> stride(order);
  for (int s = 0; s < order; ++s) stride[s] = power(d, order - 1 - s);
  const int nc = T.components();
  for (std::size_t p = 0; p < T.points(); ++p) {
    const Mat c = connection_matrix(conn, p, i);
    const double* t = T.data(p);
    double* o = out.data(p);
    for (int comp = 0; comp < nc; ++comp) {
      double acc = 0.0;
      for (int s = 0; s < order; ++s) {
        const int a = (comp / stride[s]) % d;
        const int base = comp - a * stride[s];
        if (s < T.rank().upper) {
          for (int e = 0; e < d; ++e) acc += c(a, e) * t[base + e * stride[s]];
        } else {
          for (int e = 0; e < d; ++e) acc -= c(e, a) * t[base + e * stride[s]];
        }
      }
      o[comp] += acc;
    }
  }
  return out;
}

TensorField covariant_derivative(const TensorField& T, const TensorField& conn) {
  const int d = T.dim();
  const Rank r = T.rank();
  TensorField out(T.grid(), Rank{r.upper, r.lower + 1});
  const int lower_size = power(d, r.lower);
  const int upper_size = power(d, r.upper);
  for (int i = 0; i < d; ++i) {
    const TensorField Di = covariant_derivative_along(T, conn, i);
    for (int u = 0; u < upper_size; ++u)
      for (int l = 0; l < lower_size; ++l)
        out.values().row((u * d + i) * lower_size + l) = Di.values().row(u * lower_size + l);
  }
  return out;
}

TensorField delta(const TensorField& T, const AKStructure& J, const ConnectionData& conn) {
  const Rank r = T.rank();
  if (r.lower < 1) throw std::invalid_argument("delta: input needs at least one lower index, got " + to_string(r));
  require_same_grid(T, J.J(), "delta");
  const int d = T.dim();
  const int rest = power(d, r.lower - 1);
  const int upper_size = power(d, r.upper);
  TensorField out(T.grid(), Rank{r.upper, r.lower - 1});
  for (int i = 0; i < d; ++i) {
    const TensorField Di = covariant_derivative_along(T, conn.christoffel, i);
    for (std::size_t p = 0; p < T.points(); ++p) {
      const auto ginv = J.g_inv().matrix(p);
      const double* t = Di.data(p);
      double* o = out.data(p);
      for (int j = 0; j < d; ++j) {
        const double w = -ginv(i, j);
        for (int u = 0; u < upper_size; ++u)
          for (int l = 0; l < rest; ++l) o[u * rest + l] += w * t[(u * d + j) * rest + l];
      }
    }
  }
  return out;
}

TensorField curvature_operator(const TensorField& conn, int i, int j) {
  const TensorField ci = direction_field(conn, i);
  const TensorField cj = direction_field(conn, j);
  TensorField out = spectral_partial(cj, i) - spectral_partial(ci, j) + commutator(ci, cj);
  return -1.0 * out;
}

TensorField symplectic_form_field(const PeriodicGrid& grid) {
  return constant_matrix_field(grid, kBilinear, standard_symplectic(grid.m()));
}

TensorField two_form_inner(const TensorField& a, const TensorField& b, const AKStructure& J) {
  TensorField out(a.grid(), kScalar);
  for (std::size_t p = 0; p < out.points(); ++p) {
    const auto ginv = J.g_inv().matrix(p);
    const Mat raised = ginv * b.matrix(p) * ginv;
    out(p) = 0.5 * a.matrix(p).cwiseProduct(raised).sum();
  }
  return out;
}

TensorField exterior_derivative(const TensorField& alpha) {
  require_rank(alpha, kCovector, "exterior_derivative");
  const int d = alpha.dim();
  const auto da = spectral_gradient(alpha);
  TensorField out(alpha.grid(), kBilinear);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.values().row(i * d + j) = da[i].values().row(j) - da[j].values().row(i);
  return out;
}

CurvatureBundle curvature_bundle(const AKStructure& J, const ConnectionData& conn, bool keep_riemann) {
  const PeriodicGrid& grid = J.grid();
  const int d = grid.dim();
  const std::size_t np = grid.size();
  TensorField ric(grid, kBilinear), rho_star(grid, kBilinear), rho_h(grid, kBilinear);
  std::optional<TensorField> riemann;
  if (keep_riemann) riemann.emplace(grid, Rank{1, 3});
  auto riemann_add = [&](int i, int j, const Mat& m, double sign, std::size_t p) {
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) (*riemann)(p, ((k * d + i) * d + j) * d + l) += sign * m(k, l);
  };

  // Derivative terms, one direction field at a time: R_std(i,j) gets +d_i C_j, R_std(j,i) gets -d_i C_j.
  for (int j = 0; j < d; ++j) {
    const auto dG = spectral_gradient(direction_field(conn.christoffel, j));
    const auto dA = spectral_gradient(direction_field(conn.hermitian, j));
    for (std::size_t p = 0; p < np; ++p) {
      const auto jm = J.J().matrix(p);
      for (int i = 0; i < d; ++i) {
        const auto g = dG[i].matrix(p);
        for (int l = 0; l < d; ++l) {
          ric(p, j * d + l) += g(i, l);
          ric(p, i * d + l) -= g(j, l);
        }
        const double ts = 0.5 * (jm * g).trace();
        rho_star(p, i * d + j) += ts;
        rho_star(p, j * d + i) -= ts;
        const double th = 0.5 * (jm * dA[i].matrix(p)).trace();
        rho_h(p, i * d + j) += th;
        rho_h(p, j * d + i) -= th;
        if (keep_riemann) {
          riemann_add(i, j, g, -1.0, p);
          riemann_add(j, i, g, 1.0, p);
        }
      }
    }
  }
  // Commutator terms.
  for (std::size_t p = 0; p < np; ++p) {
    const Mat jm = J.J().matrix(p);
    for (int i = 0; i < d; ++i) {
      const Mat gi = connection_matrix(conn.christoffel, p, i);
      const Mat ai = connection_matrix(conn.hermitian, p, i);
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        const Mat gj = connection_matrix(conn.christoffel, p, j);
        const Mat aj = connection_matrix(conn.hermitian, p, j);
        const Mat cg = gi * gj - gj * gi;
        const Mat ca = ai * aj - aj * ai;
        for (int l = 0; l < d; ++l) ric(p, j * d + l) += cg(i, l);
        rho_star(p, i * d + j) += 0.5 * (jm * cg).trace();
        rho_h(p, i * d + j) += 0.5 * (jm * ca).trace();
        if (keep_riemann) riemann_add(i, j, cg, -1.0, p);
      }
    }
  }

  CurvatureBundle b{std::move(riemann),
                    std::move(ric),
                    TensorField(grid, kBilinear),
                    TensorField(grid, kBilinear),
                    std::move(rho_star),
                    std::move(rho_h),
                    TensorField(grid, kScalar),
                    TensorField(grid, kScalar),
                    0.0,
                    TensorField(grid, kVector)};
  const Mat w = standard_symplectic(grid.m());
  for (std::size_t p = 0; p < np; ++p) {
    const Mat jm = J.J().matrix(p);
    const Mat ginv = J.g_inv().matrix(p);
    const Mat r = b.ricci.matrix(p);
    const Mat rp = 0.5 * (r + jm.transpose() * r * jm);
    b.ricci_plus.matrix(p) = rp;
    b.rho.matrix(p) = jm.transpose() * rp;
    b.scalar(p) = (ginv * r).trace();
    b.hermitian_scalar(p) = b.rho_hermitian.matrix(p).cwiseProduct(ginv * w * ginv).sum();
  }
  b.mean_hermitian_scalar = integrate(b.hermitian_scalar) / grid.volume();
  b.K = grad_omega(b.hermitian_scalar, J);
  return b;
}

Geometry make_geometry(AKStructure J, bool keep_riemann) {
  ConnectionData conn = christoffel(J);
  CurvatureBundle curv = curvature_bundle(J, conn, keep_riemann);
  return {std::move(J), std::move(conn), std::move(curv)};
}

}  // namespace aklab

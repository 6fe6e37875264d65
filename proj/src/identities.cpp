#include "aklab/identities.hpp"

#include <algorithm>
#include <cmath>

#include "aklab/spectral.hpp"

namespace aklab {

namespace {

double sup(const TensorField& f) { return f.max_abs(); }

}  // namespace

std::vector<OperatorReport> identity_battery(const AKStructure& J, const ConnectionData& conn,
                                             const BatteryOptions& options) {
  const PeriodicGrid& grid = J.grid();
  const int d = grid.dim();
  const double tol = options.tolerance;
  std::vector<OperatorReport> out;

  const TensorField N = nijenhuis(J);
  const TensorField& DJ = conn.DJ;
  double res_nij = 0.0, res_eq23 = 0.0, scale_nij = 0.0, scale_eq23 = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Mat j = J.J().matrix(p);
    const Mat g = J.g().matrix(p);
    std::vector<Mat> dj(d);
    for (int x = 0; x < d; ++x) dj[x] = connection_matrix(DJ, p, x);
    for (int x = 0; x < d; ++x) {
      // Nijenhuis matrix N(., .) contracted: rhs(y, z) = 2 g_ab J^a_x N^b_yz
      Vec gjx = g * j.col(x);
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z) {
          const double lhs = g.row(z).dot(dj[x].col(y));
          double rhs = 0.0;
          for (int b = 0; b < d; ++b) rhs += gjx[b] * N(p, (b * d + y) * d + z);
          rhs *= 2.0;
          res_nij = std::max(res_nij, std::abs(lhs - rhs));
          scale_nij = std::max(scale_nij, std::abs(lhs));
        }
      Mat along_jx = Mat::Zero(d, d);
      for (int k = 0; k < d; ++k) along_jx += j(k, x) * dj[k];
      const Mat rhs = dj[x] * j;
      res_eq23 = std::max(res_eq23, (along_jx - rhs).cwiseAbs().maxCoeff());
      scale_eq23 = std::max(scale_eq23, rhs.cwiseAbs().maxCoeff());
    }
  }
  out.push_back(make_report("nijenhuis_identity", res_nij, scale_nij, tol, grid, false,
                            "((D_X J)Y,Z) - 2(JX,N(Y,Z))"));
  out.push_back(make_report("complex_derivative_identity", res_eq23, scale_eq23, tol, grid, false,
                            "D_{JX}J - (D_X J)J"));

  const TensorField dJ = delta(J.J(), J, conn);
  out.push_back(make_report("delta_J", sup(dJ), sup(DJ), tol, grid, false, "delta J"));

  const TensorField f = random_band_limited(grid, options.seed, options.cutoff, 1.0);
  const TensorField dcf = d_c(f, J);
  out.push_back(make_report("delta_dc", sup(delta(dcf, J, conn)), sup(dcf), tol, grid, false, "delta d^c f"));

  const TensorField xi = random_band_limited(grid, options.seed + 1, options.cutoff, 1.0, kVector);
  const TensorField lhs_a3 = flat(delta(covariant_derivative(xi, conn.christoffel), J, conn), J);
  const TensorField rhs_a3 = delta(covariant_derivative(flat(xi, J), conn.christoffel), J, conn);
  out.push_back(make_report("divergence_commutes_with_flat", sup(lhs_a3 - rhs_a3), sup(lhs_a3), tol, grid, false,
                            "(delta D xi)^flat - delta D(xi^flat)"));

  TensorField trace_d2(grid, kEndomorphism);
  for (int x = 0; x < d; ++x) {
    const TensorField d2 = covariant_derivative_along(DJ, conn.christoffel, x);
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const auto ginv = J.g_inv().matrix(p);
      for (int k = 0; k < d; ++k) {
        double acc = 0.0;
        for (int a = 0; a < d; ++a)
          for (int l = 0; l < d; ++l) acc += ginv(a, l) * d2(p, (k * d + a) * d + l);
        trace_d2(p, k * d + x) = acc;
      }
    }
  }
  out.push_back(make_report("second_derivative_trace", sup(trace_d2), sup(DJ), tol, grid, false,
                            "sum_i (D^2_{X,e_i} J) e_i"));
  return out;
}

}  // namespace aklab

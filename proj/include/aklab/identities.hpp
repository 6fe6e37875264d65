#pragma once

#include <cstdint>
#include <vector>

#include "aklab/operators.hpp"

namespace aklab {

struct BatteryOptions {
  std::uint64_t seed = 1;
  int cutoff = 2;            // band limit of the random test inputs
  double tolerance = 1e-7;   // sup-norm residual bound
};

/// Pointwise identities that every compatible structure satisfies, each evaluated as a sup-norm residual:
/// ((D_X J)Y, Z) = 2(JX, N(Y,Z)); D_{JX}J = (D_X J)J; delta J = 0; delta d^c f = 0;
/// (delta D xi)^flat = delta D (xi^flat); sum_i (D^2_{X,e_i} J) e_i = 0.
/// Needs only the Levi-Civita connection, not the curvature.
std::vector<OperatorReport> identity_battery(const AKStructure& J, const ConnectionData& conn,
                                             const BatteryOptions& options = {});

}  // namespace aklab

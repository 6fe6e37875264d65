#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aklab/operators.hpp"

namespace aklab {

/// Default stability constant: dt <= c_cfl * h^4.
double default_flow_cfl(int m);

/// Velocity of the Hermitian Calabi flow, J P(s) = J (L_K J) / 2.
TangentField flow_velocity(const Geometry& G);

/// One step of the flow by a fourth-order Runge-Kutta-Munthe-Kaas scheme: stages live in sp(2m) and each
/// stage structure is exp(-u) J exp(u), so every state is compatible up to rounding.
AKStructure flow_step(const AKStructure& J, double dt);

struct FlowRecord {
  double t = 0.0;
  double calabi = 0.0;
  double s_dev = 0.0;     // sup |s - mean s|
  double min_eig_g = 0.0;
  double res_J2 = 0.0;
  double res_compat = 0.0;
  double dt = 0.0;
};

struct FlowTrace {
  std::vector<FlowRecord> records;

  std::string to_csv() const;
  /// Largest relative increase of the Calabi column between consecutive records.
  double worst_increase() const;
};

struct FlowOptions {
  double dt = 0.0;
  int steps = 0;
  double c_cfl = 0.0;            // 0 selects default_flow_cfl(m)
  double min_eig_floor = 1e-8;
  double monotone_tol = 1e-12;
};

struct FlowResult {
  FlowTrace trace;
  bool ok = true;
  bool monotone = true;
  std::string message;
};

/// Runs the flow, recording the initial state and every step. Stops at the first failing step and keeps the
/// records up to the last good one. The observer, if set, sees the geometry of every recorded state.
FlowResult run_flow(const AKStructure& J0, const FlowOptions& options,
                    const std::function<void(const Geometry&, const FlowRecord&)>& observer = {});

/// exp(t b) J exp(-t b) with b = J v / 2.
AKStructure geodesic_closed_form(const AKStructure& J0, const TangentField& v0, double t);

struct GeodesicSample {
  double t = 0.0;
  double res_J2 = 0.0;
  double res_compat = 0.0;
  double speed_drift = 0.0;  // max |tr(J'^2) - tr(v0^2)| over points
};

struct GeodesicCurve {
  TensorField J;      // state at the final time
  TensorField Jdot;
  std::vector<GeodesicSample> samples;
};

/// Integrates J'' = J' J' J pointwise with classical RK4 on (J, J').
GeodesicCurve geodesic_integrate(const AKStructure& J0, const TangentField& v0, double T, double dt,
                                 double drift_tol = 1e-8, int sample_every = 100);

/// Richardson-extrapolated finite-difference estimate.
struct FdEstimate {
  std::vector<double> steps;
  std::vector<double> values;
  double extrapolated = 0.0;
  double order_ratio = 0.0;  // (D(h) - D(h/2)) / (D(h/2) - D(h/4)), about 4 for second order
};

inline const std::vector<double> kDefaultFdSteps{1e-2, 5e-3, 2.5e-3};

/// Second mixed derivative [[J,a],b] of J(t1,t2) = exp(-(t1 a + t2 b)) J exp(t1 a + t2 b), a and b the generators
/// of u and v. Symmetric in (a, b) since [a,b] commutes with J.
TensorField hessian_mixed_partial(const AKStructure& J, const TangentField& u, const TangentField& v);

/// -<d2J, J L_K J> + <u, H(v)> - <u, v L_K J>.
double hessian_formula(const Geometry& G, const TangentField& u, const TangentField& v);
/// 2 <(JP)* u, (JP)* v>, the form at constant Hermitian scalar curvature.
double hessian_reduced(const Geometry& G, const TangentField& u, const TangentField& v);
/// Centered four-point mixed difference of the Calabi functional over the exponential family.
FdEstimate hessian_fd(const AKStructure& J, const TangentField& u, const TangentField& v,
                      const std::vector<double>& steps = kDefaultFdSteps);

struct SecondVariation {
  double formula = 0.0;
  FdEstimate fd;
};

/// <H(v), v> against the centered second difference of the Calabi functional along the geodesic.
SecondVariation second_variation_geodesic(const Geometry& G, const TangentField& v,
                                          const std::vector<double>& steps = kDefaultFdSteps);

/// Relative least-squares residual of w against span{P(f), JP(f)} over f in the Fourier basis |k|_inf <= cutoff.
double orbit_residual(const Geometry& G, const TensorField& w, int cutoff);

}  // namespace aklab

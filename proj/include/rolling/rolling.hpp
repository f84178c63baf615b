#pragma once

// Integration of rolling curves (no-slip + no-spin) along prescribed base
// curves, developments of geodesics, and a generic flow for fields on Q.

#include <vector>

#include "rolling/state_space.hpp"

namespace rolling {

struct Trajectory {
  std::vector<double> ts;
  std::vector<RollingState> states;
  double max_preprojection_drift = 0.0;

  const RollingState& back() const { return states.back(); }
  // Mhat-leg as a dense curve; velocities from the no-slip identity
  DenseCurve<3> mhat_curve(const GeometryPair& gp, const CurveFn2& gamma) const;
  DenseCurve<2> m_curve(const CurveFn2& gamma) const;
};

Trajectory roll_along(const GeometryPair& gp, const RollingState& q0, const CurveFn2& gamma,
                      double T, double step);

// max over interior nodes of |d/dt xh - A gamma'| (fourth-order stencils)
double noslip_residual(const GeometryPair& gp, const Trajectory& traj, const CurveFn2& gamma);

struct Development {
  Trajectory traj;
  DenseCurve<2> base;  // geodesic on M
};
Development develop_geodesic(const GeometryPair& gp, const RollingState& q0, const V2& v0_frame,
                             double T, double step);

// flow of a field on Q in chart coordinates, with chart re-centering;
// constraint maintenance comes from the rotation parametrization
RollingState flow(const GeometryPair& gp, const Field& field, const RollingState& q0, double t,
                  double step);

// independent check of the no-spinning property: the coefficient matrix
// must equal the double transport A(t) = P_0^t(gamma_hat) A_0 P_t^0(gamma)
M32 double_transport_oracle(const GeometryPair& gp, const RollingState& q0, const CurveFn2& gamma,
                            const CurveFn3& gamma_hat, double T, double step);

}  // namespace rolling

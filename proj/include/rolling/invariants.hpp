#pragma once

// Scalar invariants at a state q: the sectional/mixed curvature functions of
// Mhat on the moving planes, the polar pair (r, phi), omega, the rotated
// (tilde) quantities, beta, lambda, and the product/warped-scenario panel
// (alpha, tau_i, Theta, Psi, P, U, I). Undefined entries are typed absences.

#include <optional>
#include <string>

#include "rolling/rolling.hpp"

namespace rolling {

// tolerances used by the hypothesis predicates
constexpr double kRadiusTol = 1e-12;     // r defined when r >= this
constexpr double kOmegaTol = 1e-10;      // omega defined when |K - sigma| >= this
constexpr double kEqualityTol = 1e-9;    // "K = sigma" predicate (relative)
constexpr double kInequalityTol = 1e-6;  // "not equal" predicate

struct CurvaturePanel {
  double sigma1 = 0, sigma2 = 0, sigma3 = 0;  // sigma3 is sigma_hat
  double pi_x = 0, pi_y = 0, pi_z = 0;
  double K = 0;
  std::optional<double> beta;  // costs a geodesic sweep; filled on request
  std::optional<double> r, phi, omega;
  std::optional<double> sigma1_t, sigma2_t, pi_z_t;  // tilde quantities
  std::optional<double> lambda;                      // -sigma + omega^2 (K - sigma)

  bool k_equals_sigma() const {
    return std::abs(K - sigma3) < kEqualityTol * std::max(1.0, std::abs(K));
  }
  bool pi_nonzero() const { return r && *r >= kInequalityTol; }
  // classification case label at this state: 1..4, or 0 when between tolerances
  int case_label() const;
};

// matrix of the curvature operator of Mhat on 2-vectors in the moving basis
// (*AX, *AY, *Z_A)
M33 curvature_lambda2_moving(const GeometryPair& gp, const RollingState& q);

double beta_invariant(const GeometryPair& gp, const RollingState& q);

CurvaturePanel curvature_panel(const GeometryPair& gp, const RollingState& q,
                               bool with_beta = false);

// rolling curvature A R(X,Y) - Rhat(AX,AY) A in frame coefficients
M32 rol_tensor(const GeometryPair& gp, const RollingState& q);
// A(X^Y) + omega theta_{Ytilde} (x) Z_A; requires omega
M32 rolbar(const GeometryPair& gp, const RollingState& q);

struct ProductPanel {
  double alpha = 0, tau1 = 0, tau2 = 0;
  double P = 0, I = 0;
  std::optional<double> Theta, Psi, KN;  // product target only
  std::optional<double> U;               // both factors warped/product
};
ProductPanel product_panel(const GeometryPair& gp, const RollingState& q);

struct ConditionPanel {
  // the five condition functions gating the warped classification case
  double g_xt = 0;        // G_Xtilde
  double wgy_minus_hx = 0;  // omega G_Ytilde - H_Xtilde
  double h_yt = 0;        // H_Ytilde
  double c4 = 0;          // omega nu(theta_Yt (x) Z) phi - 1
  double c5 = 0;          // nu(theta_Yt (x) Z) omega
  // ingredients
  double G_xt = 0, G_yt = 0, H_xt = 0, H_yt = 0;
};
ConditionPanel condition_panel(const GeometryPair& gp, const RollingState& q);

struct EigenStructure {
  V3 eigenvalues;  // ascending
  M33 eigenvectors;  // columns, in the (*AX,*AY,*Z) basis
  std::array<int, 3> multiplicity{};  // cluster sizes per eigenvalue
};
EigenStructure eigen_structure(const GeometryPair& gp, const RollingState& q);

// ---------------------------------------------------------------------------
// named scalar functions on Q and a flow-difference derivative engine

enum class ScalarId {
  Phi,
  Omega,
  Radius,
  Sigma1,
  Sigma2,
  Sigma,
  PiX,
  PiY,
  PiZ,
  Sigma1T,
  Sigma2T,
  PiZT,
  GaussK,
  Beta,
  BetaOver2R,
  Lambda,
  Alpha,
  UFn,
  IFn,
  PFn,
  GXt,
  GYt,
  HXt,
  HYt,
};

double eval_scalar(const GeometryPair& gp, const RollingState& q, ScalarId id);
bool scalar_is_angle(ScalarId id);

// fourth-order central difference of a scalar along the flow of a field
double deriv_along(const GeometryPair& gp, const Field& field, ScalarId id,
                   const RollingState& q, double h);
double deriv_along_fn(const GeometryPair& gp, const Field& field,
                      const std::function<double(const RollingState&)>& f, bool angle,
                      const RollingState& q, double h);
// derivative along a single tangent vector, realized as a chart line
double deriv_along_vector(const GeometryPair& gp, const RollingState& q, const QTangent& v,
                          const std::function<double(const RollingState&)>& f, double h);

}  // namespace rolling

#pragma once

// Numerical estimation of the local rolling-orbit dimension: close the
// rolling lifts {L_R(X), L_R(Y)} under Lie brackets at q0 and measure the
// rank of the family, with explicit singular-value gap reporting.

#include <string>
#include <vector>

#include "rolling/brackets.hpp"

namespace rolling {

struct BracketFamily {
  std::vector<V8> vectors;  // chart coordinates at q0
  std::vector<std::string> labels;
  int depth_reached = 0;
};

// Generated fields are propagated through exact truncated-Taylor expansions
// of the generator realizations (poly3.hpp); each appended vector is the
// coordinate bracket formula evaluated at q0. Stops at `depth` or when the
// rank saturates twice.
BracketFamily bracket_family(const GeometryPair& gp, const RollingState& q0, int depth = 4);

struct RankReport {
  std::vector<double> singvals;
  int rank = 0;
  double gap_ratio = 0;  // sigma_rank / sigma_{rank+1}
  bool confident = false;
  int classification = 0;
  BracketFamily family;
};

RankReport orbit_dimension(const GeometryPair& gp, const RollingState& q0, int depth = 4,
                           double tau = 1e-7);

// relative distance of each realized field to the rank-truncated span of the
// bracket family
std::vector<double> tangency_check(const GeometryPair& gp, const RollingState& q0,
                                   const std::vector<FieldId>& fields, int depth = 4,
                                   double tau = 1e-7);

// rank of the pushforward of the family under pi_{Q,Mhat} (the dxh block),
// plus the largest component along Z_A of the normalized image directions
struct ImageRankReport {
  int rank = 0;
  double max_z_component = 0;
  std::vector<double> singvals;
};
ImageRankReport mhat_image_rank(const GeometryPair& gp, const RollingState& q0,
                                const BracketFamily& fam, double tau = 1e-7);

// |directional derivative| of f along each (normalized) family vector
std::vector<double> annihilation_residuals(const GeometryPair& gp, const RollingState& q0,
                                           const BracketFamily& fam,
                                           const std::function<double(const RollingState&)>& f);

// finite-difference route for the family (depth <= 3 is practical); used to
// cross-check the jet propagation
BracketFamily bracket_family_fd(const GeometryPair& gp, const RollingState& q0, int depth = 3);

}  // namespace rolling

#pragma once

// The explicit Lie-bracket and derivative tables as evaluable formulas, a
// finite-difference bracket oracle on Q-charts, and a verifier comparing the
// two. Left sides always go through the oracle; right sides
// are assembled from panel scalars in the moving basis.

#include <optional>
#include <string>
#include <vector>

#include "rolling/invariants.hpp"

namespace rolling {

enum class FieldId {
  LR_X,
  LR_Y,
  LR_Xt,
  LR_Yt,
  LNS_AX,
  LNS_AY,
  LNS_AXt,
  LNS_AYt,
  LNS_Z,
  NU_XY,
  NU_TX,
  NU_TY,
  NU_TXt,
  NU_TYt,
  NU_ROLBAR,
  F1,
  F2,
  LNS_Xt_only,  // L_NS(X~, 0)
  LNS_Yt_only,
};

QTangent realize(const GeometryPair& gp, const RollingState& q, FieldId id);
Field as_field(const GeometryPair& gp, FieldId id);
std::string field_name(FieldId id);

// ---------------------------------------------------------------------------
// oracle: coordinate bracket formula in a chart at q, central differences
// with one Richardson extrapolation

QTangent fd_bracket(const GeometryPair& gp, const Field& F, const Field& G,
                    const RollingState& q, double h = 1e-4, bool richardson = true);

// ---------------------------------------------------------------------------
// the general bracket formulas for generator families

struct GeneratorPair {
  std::function<V2(const RollingState&)> T;    // frame coefficients on M
  std::function<V3(const RollingState&)> That; // frame coefficients on Mhat
};
struct VerticalGen {
  std::function<M32(const RollingState&)> U;  // frame coefficients, compatible
};

Field ns_field(const GeometryPair& gp, const GeneratorPair& g);
Field nu_field(const GeometryPair& gp, const VerticalGen& g);

QTangent general_bracket_ns_ns(const GeometryPair& gp, const GeneratorPair& T,
                               const GeneratorPair& S, const RollingState& q);
QTangent general_bracket_ns_nu(const GeometryPair& gp, const GeneratorPair& T,
                               const VerticalGen& U, const RollingState& q);
QTangent general_bracket_nu_nu(const GeometryPair& gp, const VerticalGen& U,
                               const VerticalGen& V, const RollingState& q);

// ---------------------------------------------------------------------------
// identity records

struct IdentityValue {
  std::vector<double> v;
  static IdentityValue scalar(double s) { return {{s}}; }
  static IdentityValue tangent(const QTangent& t) {
    return {std::vector<double>(t.c.v.begin(), t.c.v.end())};
  }
  static IdentityValue pair2(const V2& p) { return {{p[0], p[1]}}; }
  static IdentityValue matrix33(const M33& m) {
    return {std::vector<double>(m.a.begin(), m.a.end())};
  }
  double norm_value() const {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  IdentityValue diff(const IdentityValue& o) const {
    IdentityValue d = *this;
    for (size_t i = 0; i < v.size(); ++i) d.v[i] -= o.v[i];
    return d;
  }
};

struct IdentityRecord {
  std::string table;
  int index = 0;
  std::string name;
  // empty result = admissible; otherwise the reason for skipping
  std::function<std::optional<std::string>(const GeometryPair&, const RollingState&)> hypothesis;
  std::function<IdentityValue(const GeometryPair&, const RollingState&)> lhs;
  std::function<IdentityValue(const GeometryPair&, const RollingState&)> rhs;
};

std::vector<std::string> all_table_ids();
std::vector<IdentityRecord> identity_table(const std::string& table_id);

struct VerifyOutcome {
  bool skipped = false;
  std::string skip_reason;
  double lhs_norm = 0, abs_err = 0, rel_err = 0;
  bool pass = false;
};

VerifyOutcome verify_identity(const GeometryPair& gp, const IdentityRecord& rec,
                              const RollingState& q, double rel_tol = 1e-4);

}  // namespace rolling

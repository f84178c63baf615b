#include <doctest.h>

#include <cmath>

#include "rolling/scenarios.hpp"

using namespace rolling;

TEST_SUITE_BEGIN("orbit_rank");

TEST_CASE("jet-propagated brackets agree with the finite-difference family") {
  BuiltScenario s = build_geometry(scenario_by_name("case_iii_generic"));
  BracketFamily jet = bracket_family(*s.gp, s.q0, 2);
  BracketFamily fd = bracket_family_fd(*s.gp, s.q0, 2);
  REQUIRE(jet.vectors.size() >= 5);
  REQUIRE(fd.vectors.size() == jet.vectors.size());
  for (size_t i = 0; i < jet.vectors.size(); ++i) {
    double scale = std::max(1.0, norm(jet.vectors[i]));
    CHECK(norm(jet.vectors[i] - fd.vectors[i]) < 1e-5 * scale);
  }
}

TEST_CASE("depth monotonicity of the family rank") {
  BuiltScenario s = build_geometry(scenario_by_name("case_iii_matched"));
  int prev = 0;
  for (int depth = 1; depth <= 4; ++depth) {
    RankReport rep = orbit_dimension(*s.gp, s.q0, depth);
    CHECK(rep.rank >= prev);
    prev = rep.rank;
  }
  CHECK(prev == 7);
}

TEST_CASE("case (i): rank 2 at every depth") {
  BuiltScenario s = build_geometry(scenario_by_name("case_i"));
  for (int depth : {2, 3, 4}) {
    RankReport rep = orbit_dimension(*s.gp, s.q0, depth);
    CHECK(rep.rank == 2);
    CHECK(rep.confident);
  }
}

TEST_CASE("case (ii): rank 5 and a 2-plane image on the target") {
  BuiltScenario s = build_geometry(scenario_by_name("case_ii"));
  RankReport rep = orbit_dimension(*s.gp, s.q0);
  CHECK(rep.rank == 5);
  CHECK(rep.confident);
  ImageRankReport img = mhat_image_rank(*s.gp, s.q0, rep.family);
  CHECK(img.rank == 2);
  CHECK(img.max_z_component < 1e-6);
}

TEST_CASE("case (iii), matched and generic: rank 7") {
  for (const char* name : {"case_iii_matched", "case_iii_generic"}) {
    BuiltScenario s = build_geometry(scenario_by_name(name));
    RankReport rep = orbit_dimension(*s.gp, s.q0);
    CHECK_MESSAGE(rep.rank == 7, name);
    CHECK(rep.confident);
  }
}

TEST_CASE("rank is stable across the threshold range") {
  for (const char* name : {"case_i", "case_ii", "case_iii_matched", "ss12_exp"}) {
    BuiltScenario s = build_geometry(scenario_by_name(name));
    int r9 = orbit_dimension(*s.gp, s.q0, 4, 1e-9).rank;
    int r7 = orbit_dimension(*s.gp, s.q0, 4, 1e-7).rank;
    int r5 = orbit_dimension(*s.gp, s.q0, 4, 1e-5).rank;
    CHECK_MESSAGE(r9 == r7, name);
    CHECK_MESSAGE(r7 == r5, name);
  }
}

TEST_CASE("tangency: the involutive frames lie in the family span") {
  BuiltScenario s2 = build_geometry(scenario_by_name("case_ii"));
  auto res5 = tangency_check(*s2.gp, s2.q0,
                             {FieldId::LR_X, FieldId::LR_Y, FieldId::NU_XY, FieldId::LNS_AX,
                              FieldId::LNS_AY});
  for (double r : res5) CHECK(r < 1e-6);

  BuiltScenario s3 = build_geometry(scenario_by_name("case_iii_matched"));
  auto res7 = tangency_check(*s3.gp, s3.q0,
                             {FieldId::LR_Xt, FieldId::LR_Yt, FieldId::LNS_AXt, FieldId::LNS_AYt,
                              FieldId::LNS_Z, FieldId::NU_TYt, FieldId::NU_XY});
  for (double r : res7) CHECK(r < 1e-6);

  // negative control: a vertical off a rank-2 orbit
  BuiltScenario s1 = build_geometry(scenario_by_name("case_i"));
  auto off = tangency_check(*s1.gp, s1.q0, {FieldId::NU_TX});
  CHECK(off[0] > 0.1);
}

TEST_CASE("conserved functions are annihilated by the family") {
  BuiltScenario s = build_geometry(scenario_by_name("case_iii_matched"));
  BracketFamily fam = bracket_family(*s.gp, s.q0, 4);
  const GeometryPair& gp = *s.gp;
  auto res = annihilation_residuals(gp, s.q0, fam, [&gp](const RollingState& q) {
    return product_panel(gp, q).alpha;
  });
  for (double r : res) CHECK(r < 1e-5);
}

TEST_CASE("flat against flat with a generic start: measured rank is recorded") {
  // no classification claim here; the family is run and its span reported
  GeometryPair gp{make_chart2("euclidean2"), make_chart3("euclidean3")};
  M32 A{};
  A(0, 0) = std::cos(0.5);
  A(1, 0) = std::sin(0.5);
  A(0, 1) = -std::sin(0.5) * std::cos(0.3);
  A(1, 1) = std::cos(0.5) * std::cos(0.3);
  A(2, 1) = std::sin(0.3);
  RollingState q0 = make_state(gp, V2{{0.1, -0.2}}, V3{{0.2, 0.0, 0.1}}, A);
  RankReport rep = orbit_dimension(gp, q0, 2);
  MESSAGE("flat/flat family rank at depth 2: ", rep.rank);
  CHECK(rep.rank >= 2);
  CHECK(rep.confident);
}

TEST_CASE("ss12: rank at most 6 with a confident gap") {
  for (const char* name : {"ss12_exp", "ss12_affine"}) {
    BuiltScenario s = build_geometry(scenario_by_name(name));
    RankReport rep = orbit_dimension(*s.gp, s.q0);
    CHECK_MESSAGE(rep.rank <= 6, name, " measured rank ", rep.rank);
    CHECK(rep.confident);
  }
}

TEST_SUITE_END();

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "quadfree/errors.hpp"
#include "quadfree/freesets.hpp"

using namespace quadfree;
using fixtures::kR2;
using fixtures::vec;

TEST_CASE("kind names round-trip") {
  for (auto k : {FreeSetKind::CLambda, FreeSetKind::CGLambda, FreeSetKind::CPhiLambda, FreeSetKind::CRPhiLambda,
                 FreeSetKind::Halfspace, FreeSetKind::CylinderLift})
    CHECK(free_set_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(free_set_kind_from_string("Sphere"), Error);
}

TEST_CASE("equal-norm example: CGLambda margin at (3, -4, 5) is -5") {
  const auto fs = make_free_set(FreeSetKind::CGLambda, fixtures::equal_norm_example());
  CHECK(margin(fs, vec({3, -4, 5})) == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("CRPhiLambda reproduces the two-inequality description of the running example") {
  const auto fs = make_free_set(FreeSetKind::CRPhiLambda, fixtures::running_example());
  SplitMix64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const VectorXd w = rng.normal_vector(3) * 4.0;
    const double s = (w[0] + w[1]) / kR2;
    const double two = std::max(s - w[2], s + w[2] / kR2 - 1.0);
    CHECK(std::abs(margin(fs, w) - two) <= 1e-9);
  }
}

TEST_CASE("CRPhiLambda agrees with CPhiLambda where r vanishes") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cd = fixtures::random_case2(rng, 3, 2);
    const auto cr = make_free_set(FreeSetKind::CRPhiLambda, cd);
    const auto cp = make_free_set(FreeSetKind::CPhiLambda, cd);
    const VectorXd beta = fixtures::random_beta(rng, cd, true);
    if (beta.size() == 0) continue;
    VectorXd w(5);
    w << rng.normal_vector(3), rng.uniform(0.1, 5.0) * beta;
    CHECK(std::abs(margin(cr, w) - margin(cp, w)) <= 1e-10 * (1.0 + w.norm()));
  }
}

TEST_CASE("containment chains") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cd = fixtures::random_case2(rng, 3, 2);
    const auto cl = make_free_set(FreeSetKind::CLambda, cd);
    const auto cp = make_free_set(FreeSetKind::CPhiLambda, cd);
    const auto cr = make_free_set(FreeSetKind::CRPhiLambda, cd);
    for (int k = 0; k < 200; ++k) {
      const VectorXd w = rng.normal_vector(5) * 3.0;
      CHECK(margin(cl, w) >= margin(cp, w) - 1e-12);
      CHECK(margin(cp, w) >= margin(cr, w) - 1e-12);
    }
  }
}

TEST_CASE("margins are convex along segments") {
  SplitMix64 rng(14);
  for (auto kind : {FreeSetKind::CLambda, FreeSetKind::CPhiLambda, FreeSetKind::CRPhiLambda}) {
    const auto cd = fixtures::random_case2(rng, 2, 2);
    const auto fs = make_free_set(kind, cd);
    int tested = 0;
    for (int k = 0; k < 200000 && tested < 1000; ++k) {
      const VectorXd u = rng.normal_vector(4) * 3.0, v = rng.normal_vector(4) * 3.0;
      if (margin(fs, u) > 0.0 || margin(fs, v) > 0.0) continue;
      CHECK(margin(fs, 0.5 * (u + v)) <= 1e-9);
      ++tested;
    }
    CHECK(tested == 1000);
  }
}

TEST_CASE("boundary steps on C_lambda in the plane") {
  const auto cd = make_case_data(vec({1}), vec({-1}), vec({0.0}), false);
  const auto fs = make_free_set(FreeSetKind::CLambda, cd);
  const auto up = boundary_step(fs, vec({3, 0}), vec({0, 1}));
  CHECK(up.value == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(up.residual <= 0.0);
  CHECK(boundary_step(fs, vec({3, 0}), vec({1, 0})).infinite());
  CHECK_THROWS_AS(boundary_step(fs, vec({0, 1}), vec({1, 0})), Error);
  const auto scaled = boundary_step(fs, vec({3, 0}), vec({0, 4}));
  CHECK(scaled.value == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("boundary steps on the running example match per-branch roots") {
  const auto cd = fixtures::running_example();
  const auto fs = make_free_set(FreeSetKind::CRPhiLambda, cd);
  // Apex strictly inside both inequalities s - y <= 0 and s + y/√2 <= 1, s = (x1 + x2)/√2.
  const VectorXd apex = vec({-1, -1, 0});
  SplitMix64 rng(15);
  for (int k = 0; k < 200; ++k) {
    const VectorXd ray = rng.normal_vector(3);
    const double s0 = (apex[0] + apex[1]) / kR2, ds = (ray[0] + ray[1]) / kR2;
    double t = kInfinity;
    const double g1 = ds - ray[2], g2 = ds + ray[2] / kR2;
    if (g1 > 0) t = std::min(t, -(s0 - apex[2]) / g1);
    if (g2 > 0) t = std::min(t, -(s0 + apex[2] / kR2 - 1.0) / g2);
    const auto st = boundary_step(fs, apex, ray);
    if (std::isinf(t)) {
      CHECK(st.infinite());
    } else {
      CHECK(std::abs(st.value - t) <= 1e-8 * (1.0 + t));
    }
  }
}

TEST_CASE("build_free_set follows the case tag") {
  using fixtures::kR2;
  SUBCASE("case 1") {
    const auto cf = canonical_from_hyperplane(vec({1}), vec({1, -1}), VectorXd(), vec({1}));
    CHECK(build_free_set(cf).kind == FreeSetKind::CGLambda);
  }
  SUBCASE("case 2") {
    const auto cf = canonical_from_hyperplane(vec({-1 / kR2, 1 / kR2}), vec({1 / kR2}), VectorXd(),
                                              vec({-1 / kR2, -1 / kR2}));
    CHECK(build_free_set(cf).kind == FreeSetKind::CRPhiLambda);
    CHECK(build_free_set(cf, FreeSetKind::CPhiLambda).kind == FreeSetKind::CPhiLambda);
  }
  SUBCASE("lambda = -a") {
    const auto cf = canonical_from_hyperplane(vec({1, 0}), vec({0.5}), VectorXd(), vec({-1, 0}));
    CHECK(build_free_set(cf).kind == FreeSetKind::CPhiLambda);
  }
  SUBCASE("equal norms, m = 1") {
    const auto cf = canonical_from_hyperplane(vec({-3, 4}), vec({5}), VectorXd(), vec({-0.8, -0.6}));
    const auto fs = build_free_set(cf);
    CHECK(fs.kind == FreeSetKind::Halfspace);
    CHECK_THROWS_AS(build_free_set(cf, FreeSetKind::CPhiLambda), Error);
  }
  SUBCASE("homogeneous diagonal instance") {
    MatrixXd Q = vec({1, -1}).asDiagonal();
    const auto cf = canonicalize(make_constraint(Q, vec({0, 0}), 0, vec({2, 1})));
    const auto fs = build_free_set(cf);
    CHECK(fs.kind == FreeSetKind::CylinderLift);
    REQUIRE(fs.inner);
    CHECK(fs.inner->kind == FreeSetKind::CLambda);
    CHECK(margin(fs, cf.mapped_point) < 0.0);
  }
  SUBCASE("empty set") {
    const auto cf = canonicalize(make_constraint(MatrixXd::Identity(2, 2), vec({0, 0}), 1, vec({0, 0})));
    const auto fs = build_free_set(cf);
    CHECK(fs.kind == FreeSetKind::Halfspace);
    CHECK(margin(fs, cf.mapped_point) < 0.0);
  }
}

TEST_CASE("built sets contain the mapped point strictly") {
  const auto cf = canonicalize(fixtures::planar_example());
  const auto fs = build_free_set(cf);
  CHECK(margin(fs, cf.mapped_point) < -1e-6);
}

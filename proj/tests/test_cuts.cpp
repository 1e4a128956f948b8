#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "quadfree/cuts.hpp"
#include "quadfree/errors.hpp"
#include "quadfree/oracle.hpp"

using namespace quadfree;
using fixtures::vec;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("cone construction rejects degenerate rays") {
  MatrixXd R(2, 2);
  R << 1, 2, 1, 2;
  CHECK(code_of([&] { make_cone(vec({0, 0}), R); }) == ErrorCode::DegenerateCone);
  R << 1, 1, 0, 1e-12;
  CHECK(code_of([&] { make_cone(vec({0, 0}), R); }) == ErrorCode::DegenerateCone);
  CHECK_NOTHROW(make_cone(vec({0, 0}), MatrixXd::Identity(2, 2)));
}

TEST_CASE("unit steps give the sum cut") {
  // Identity map into (w, 1) and the halfspace Σw <= 1: every step from 0 along e_j is 1.
  CanonicalForm id;
  id.p = 3;
  id.n = 2;
  id.m = 1;
  id.l = 1;
  id.M = MatrixXd::Identity(4, 4);
  id.Minv = id.M;
  const auto fs = make_halfspace(2, 1, 1, vec({1, 1, 1, 0}), 1.0);
  const auto cone = make_cone(vec({0, 0, 0}), MatrixXd::Identity(3, 3));
  const auto cert = intersection_cut(cone, id, fs);
  for (const auto& st : cert.steps) CHECK(st.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((cert.coef + VectorXd::Ones(3)).norm() <= 1e-9);
  CHECK(cert.rhs == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(cert.violation == doctest::Approx(1.0));
}

TEST_CASE("recession rays contribute zero") {
  MatrixXd Q = vec({1, -1}).asDiagonal();
  const auto qc = make_constraint(Q, vec({0, 0}), 0, vec({3, 0}));
  MatrixXd R(2, 2);
  R << 1, -1, 0, 1;
  const auto cert = separate(qc, make_cone(qc.point, R));
  CHECK(cert.steps[0].infinite());
  CHECK(cert.weights[0] == 0.0);
  CHECK_FALSE(cert.steps[1].infinite());
  CHECK(cert.violation > 1e-9);
}

TEST_CASE("all-recession cone") {
  MatrixXd Q = vec({1, -1}).asDiagonal();
  const auto qc = make_constraint(Q, vec({0, 0}), 0, vec({3, 0}));
  MatrixXd R(2, 2);
  R << 1, 1, 0, 0.1;
  CHECK(code_of([&] { separate(qc, make_cone(qc.point, R)); }) == ErrorCode::AllRaysRecession);
}

TEST_CASE("separate reports infeasible inputs") {
  const MatrixXd I = MatrixXd::Identity(2, 2);
  SUBCASE("not separable") {
    const auto qc = make_constraint(I, vec({0, 0}), -4, vec({1, 0}));
    try {
      separate(qc, make_cone(qc.point, I));
      FAIL("expected NotSeparable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSeparable);
      CHECK(e.value() == doctest::Approx(-3.0));
    }
  }
  SUBCASE("empty set") {
    const auto qc = make_constraint(I, vec({0, 0}), 1, vec({0, 0}));
    CHECK(code_of([&] { separate(qc, make_cone(qc.point, I)); }) == ErrorCode::EmptyS);
  }
}

TEST_CASE("x^2 <= y^2 with the point (3, 0)") {
  MatrixXd Q = vec({1, -1}).asDiagonal();
  const auto qc = make_constraint(Q, vec({0, 0}), 0, vec({3, 0}));
  MatrixXd R(2, 2);
  R << -1, -1, 1, -1;
  const auto cone = make_cone(qc.point, R);
  for (auto t : {Transform::Centered, Transform::Lifted}) {
    const auto cert = separate(qc, cone, t);
    CHECK(cert.coef.dot(qc.point) - cert.rhs >= 1e-9);
    const auto rep = check_cut_validity(qc, cone, cert, 10000, 4);
    CHECK(rep.pass);
    CHECK(rep.samples >= 5000);
  }
}

TEST_CASE("planar example with unit rays") {
  const auto qc = fixtures::planar_example();
  const auto cone = make_cone(qc.point, MatrixXd::Identity(2, 2));
  const auto cert = separate(qc, cone);
  CHECK(cert.apex_margin < -1e-6);
  CHECK(cert.violation == doctest::Approx(1.0));
  CHECK(check_cut_validity(qc, cone, cert, 10000, 5).pass);
}

TEST_CASE("convex quadratic: cut matches the gradient cut") {
  // q = ‖s‖² − 1 with s̄ = (2, 0): S is the unit disc, the supporting line at the nearest point is s₁ <= 1.
  const auto qc = make_constraint(MatrixXd::Identity(2, 2), vec({0, 0}), -1, vec({2, 0}));
  MatrixXd R(2, 2);
  R << -1, -1, 1, -1;
  const auto cert = separate(qc, make_cone(qc.point, R));
  const VectorXd dir = cert.coef / cert.coef.norm();
  CHECK((dir - vec({1, 0})).norm() <= 1e-8);
  CHECK(cert.rhs / cert.coef.norm() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("scaling the rays leaves the cut unchanged") {
  const auto qc = fixtures::planar_example();
  MatrixXd R(2, 2);
  R << 1, 0.3, -0.2, 1;
  const auto a = separate(qc, make_cone(qc.point, R));
  const auto b = separate(qc, make_cone(qc.point, 7.0 * R));
  for (int j = 0; j < 2; ++j) CHECK(b.steps[j].value == doctest::Approx(a.steps[j].value / 7.0).epsilon(1e-10));
  const double sa = a.coef.norm(), sb = b.coef.norm();
  CHECK((a.coef / sa - b.coef / sb).norm() <= 1e-10);
  CHECK(std::abs(a.rhs / sa - b.rhs / sb) <= 1e-10);
}

TEST_CASE("cuts on random instances are valid inside the cone") {
  SplitMix64 rng(40);
  int made = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int p = 2 + trial % 3;
    MatrixXd G = MatrixXd::NullaryExpr(p, p, [&]() { return rng.normal(); });
    const MatrixXd Q = 0.5 * (G + G.transpose());
    const VectorXd b = rng.normal_vector(p);
    const VectorXd point = rng.normal_vector(p) * 2.0;
    const auto qc = make_constraint(Q, b, rng.normal(), point);
    if (qc.evaluate(point) <= 1e-3) continue;
    MatrixXd R = MatrixXd::NullaryExpr(p, p, [&]() { return rng.normal(); });
    try {
      const auto cone = make_cone(point, R);
      const auto cert = separate(qc, cone, trial % 2 ? Transform::Lifted : Transform::Centered);
      CHECK(cert.violation >= 1e-9);
      CHECK(check_cut_validity(qc, cone, cert, 2000, trial).pass);
      ++made;
    } catch (const Error& e) {
      CHECK((e.code() == ErrorCode::AllRaysRecession || e.code() == ErrorCode::EmptyS ||
             e.code() == ErrorCode::DegenerateCone));
    }
  }
  CHECK(made >= 15);
}

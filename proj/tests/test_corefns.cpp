#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "quadfree/corefns.hpp"
#include "quadfree/errors.hpp"

using namespace quadfree;
using fixtures::kR2;
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

// Golden-section minimum of θ ↦ ‖λ − θa‖‖y‖ − θdᵀy on [0, hi].
double golden_dual(const CaseData& cd, const VectorXd& y, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  auto f = [&](double t) { return dual_objective(cd, y, t); };
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 300 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("case data validation") {
  CHECK(code_of([] { make_case_data(vec({1, 1}), vec({1, 0}), vec({0.5}), false); }) == ErrorCode::NotUnit);
  CHECK(code_of([] { make_case_data(vec({1, 0}), vec({2, 0}), vec({0.5}), true); }) ==
        ErrorCode::PreconditionViolated);
  CHECK(code_of([] { make_case_data(vec({1, 0}), vec({0, 1}), vec({1.5}), true); }) ==
        ErrorCode::PreconditionViolated);
  CHECK(code_of([] { make_case_data(vec({1, 0}), vec({1, 0}), vec({0.5}), true); }) ==
        ErrorCode::PreconditionViolated);
  const auto cd = fixtures::running_example();
  CHECK(cd.la == doctest::Approx(0.0));
  CHECK(cd.dnorm == doctest::Approx(1 / kR2));
  const auto unnormalized = fixtures::equal_norm_example();
  CHECK(code_of([&] { phi_value(unnormalized, vec({1})); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("phi on the running example is piecewise linear") {
  const auto cd = fixtures::running_example();
  CHECK(std::abs(phi_value(cd, vec({-2})) - 2.0) <= 1e-12);
  CHECK(std::abs(phi_value(cd, vec({2})) - kR2) <= 1e-12);
  CHECK(phi_value(cd, vec({0})) == 0.0);
  CHECK(phi_gradient(cd, vec({-1}))[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(phi_gradient(cd, vec({1}))[0] == doctest::Approx(1 / kR2).epsilon(1e-12));
  CHECK(code_of([&] { phi_gradient(cd, vec({0})); }) == ErrorCode::UndefinedGradient);
}

TEST_CASE("lambda = -a gives the norm") {
  SplitMix64 rng(4);
  const VectorXd a = rng.unit_vector(3);
  const auto cd = make_case_data(-a, a, rng.unit_vector(2) * 0.6, true);
  CHECK(cd.lambda_neg_a());
  for (int k = 0; k < 20; ++k) {
    const VectorXd y = rng.normal_vector(2);
    CHECK(phi_value(cd, y) == doctest::Approx(y.norm()).epsilon(1e-14));
    CHECK((phi_gradient(cd, y) - y / y.norm()).norm() <= 1e-14);
    CHECK(theta_dual(cd, y) == 0.0);
    CHECK(r_coefficient(cd, y / y.norm()) == 0.0);
  }
}

TEST_CASE("phi properties on random data") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 4, m = 1 + trial % 3;
    const auto cd = fixtures::random_case2(rng, n, m);
    const VectorXd y = rng.normal_vector(m), y2 = rng.normal_vector(m);
    const double f = phi_value(cd, y);
    CHECK(f <= y.norm() + 1e-12);
    for (double mu : {0.5, 2.0, 10.0}) CHECK(std::abs(phi_value(cd, mu * y) - mu * f) <= 1e-10 * (1.0 + std::abs(mu * f)));
    CHECK(phi_value(cd, 0.5 * (y + y2)) <= 0.5 * (f + phi_value(cd, y2)) + 1e-10);
    CHECK(std::abs(phi_gradient(cd, y).dot(y) - f) <= 1e-10 * (1.0 + std::abs(f)));
    const double th = theta_dual(cd, y);
    CHECK(th >= 0.0);
    CHECK(std::abs(dual_objective(cd, y, th) - f) <= 1e-9 * (1.0 + std::abs(f)));
    const VectorXd x = x_beta(cd, y);
    CHECK(std::abs(cd.lambda.dot(x) - f) <= 1e-9 * (1.0 + std::abs(f)));
    CHECK(x.norm() <= y.norm() + 1e-9);
    CHECK(cd.a.dot(x) + cd.d.dot(y) <= 1e-9 * (1.0 + y.norm()));
    const VectorXd beta = y / y.norm();
    CHECK(std::abs(r_coefficient(cd, beta) - theta_dual(cd, beta)) <= 1e-10);
    if (cd.la + cd.d.dot(beta) <= 0.0) CHECK(r_coefficient(cd, beta) == 0.0);
  }
}

TEST_CASE("theta is infinite on the ray y = d when the norm of d is one") {
  const VectorXd a = vec({1, 0});
  const VectorXd lambda = vec({0.6, 0.8});
  const VectorXd d = vec({0.0, 1.0});
  const auto cd = make_case_data(lambda, a, d, true);
  CHECK(std::isinf(theta_dual(cd, d)));
  CHECK(dual_objective(cd, d, kInfinity) == doctest::Approx(-cd.la));
}

TEST_CASE("polar example matches the golden-section dual") {
  const auto cd = fixtures::polar_example();
  const VectorXd y = vec({0, 1});
  const double th = theta_dual(cd, y);
  CHECK(std::isfinite(th));
  CHECK(std::abs(golden_dual(cd, y, 10.0 * (1.0 + th)) - th) <= 1e-7);
  CHECK(std::abs(r_coefficient(cd, y) - th) <= 1e-10);
}

TEST_CASE("x_beta on the running example") {
  const auto cd = fixtures::running_example();
  const VectorXd x = x_beta(cd, vec({1}));
  CHECK(cd.lambda.dot(x) == doctest::Approx(1 / kR2).epsilon(1e-12));
  CHECK(cd.a.dot(x) == doctest::Approx(-1 / kR2).epsilon(1e-12));
  const VectorXd x1 = x_beta(cd, vec({-3}));
  CHECK((x1 - 3.0 * cd.lambda).norm() <= 1e-12);
}

TEST_CASE("G membership") {
  SUBCASE("running example: G = {-1}") {
    const auto cd = fixtures::running_example();
    const auto minus = in_G(cd, vec({-1}));
    CHECK(minus.member);
    CHECK(minus.strict);
    CHECK_FALSE(in_G(cd, vec({1})).member);
  }
  SUBCASE("equal-norm example: G = {-1}") {
    const auto cd = fixtures::equal_norm_example();
    const auto minus = in_G(cd, vec({-1}));
    CHECK(minus.member);
    CHECK_FALSE(in_G(cd, vec({1})).member);
  }
  SUBCASE("d = 0 with a negative inner product: the whole sphere") {
    SplitMix64 rng(9);
    const VectorXd a = vec({1, 0, 0});
    const auto cd = make_case_data(vec({-0.6, 0.8, 0}), a, VectorXd::Zero(4), true);
    for (int k = 0; k < 1000; ++k) CHECK(in_G(cd, rng.unit_vector(4)).strict);
  }
  SUBCASE("non-unit beta") {
    const auto cd = fixtures::running_example();
    CHECK(code_of([&] { in_G(cd, vec({0.5})); }) == ErrorCode::NotUnit);
  }
}

TEST_CASE("cap and section supports") {
  const VectorXd d = vec({0.3, 0.4});
  SplitMix64 rng(31);
  for (int k = 0; k < 200; ++k) {
    const double ell = rng.uniform(-0.45, 0.45);
    const VectorXd y = rng.normal_vector(2);
    double best = -kInfinity, best_section = -kInfinity;
    for (int i = 0; i < 200000; ++i) {
      const double t = 2.0 * M_PI * i / 200000.0;
      const VectorXd b = vec({std::cos(t), std::sin(t)});
      if (ell + d.dot(b) <= 0.0) best = std::max(best, b.dot(y));
    }
    // The section is {β : dᵀβ = −ℓ, ‖β‖ = 1}: two points in the plane.
    const VectorXd dn = d / d.norm();
    const VectorXd perp = vec({-dn[1], dn[0]});
    const double along = -ell / d.norm();
    const double across = std::sqrt(1.0 - along * along);
    for (double sgn : {-1.0, 1.0}) best_section = std::max(best_section, (along * dn + sgn * across * perp).dot(y));
    CHECK(std::abs(cap_support(ell, d, y) - best) <= 1e-4 * (1.0 + y.norm()));
    CHECK(std::abs(section_support(ell, d, y) - best_section) <= 1e-12 * (1.0 + y.norm()));
  }
  CHECK(std::isinf(cap_support(0.9, d, vec({1, 1}))));
  CHECK(cap_support(0.0, vec({0.5}), vec({2})) == doctest::Approx(-2.0));
}

#pragma once

#include <cmath>

#include "quadfree/corefns.hpp"
#include "quadfree/rng.hpp"
#include "quadfree/spectral.hpp"

namespace fixtures {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline const double kR2 = std::sqrt(2.0);

inline VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// a = (−1/√2, 1/√2), d = 1/√2, λ = (−1, −1)/√2; λᵀa = 0.
inline quadfree::CaseData running_example() {
  return quadfree::make_case_data(vec({-1 / kR2, -1 / kR2}), vec({-1 / kR2, 1 / kR2}), vec({1 / kR2}), true);
}

/// a = (−3, 4), d = 5, λ = (−4, −3)/5 with ‖a‖ = ‖d‖.
inline quadfree::CaseData equal_norm_example() {
  return quadfree::make_case_data(vec({-0.8, -0.6}), vec({-3, 4}), vec({5}), false);
}

/// Polar-figure vectors a = (3/5, −4/5), d = (3/10, 2/5), λ = (63/65, 16/65).
inline quadfree::CaseData polar_example() {
  return quadfree::make_case_data(vec({63.0 / 65, 16.0 / 65}), vec({0.6, -0.8}), vec({0.3, 0.4}), true);
}

/// q(s) = −2 + 2√2 s₁ − 2√2 s₂ + 2 s₁s₂ with s̄ = (−2, −2).
inline quadfree::QuadraticConstraint planar_example() {
  MatrixXd Q(2, 2);
  Q << 0, 1, 1, 0;
  return quadfree::make_constraint(Q, vec({2 * kR2, -2 * kR2}), -2.0, vec({-2, -2}));
}

/// Random normalized Case 2 data: ‖λ‖ = ‖a‖ = 1, ‖d‖ < 1, λ != ±a.
inline quadfree::CaseData random_case2(quadfree::SplitMix64& rng, int n, int m, double dmax = 0.95) {
  for (;;) {
    VectorXd lambda = rng.unit_vector(n);
    VectorXd a = rng.unit_vector(n);
    if (std::abs(std::abs(lambda.dot(a)) - 1.0) < 1e-3) continue;
    VectorXd d = rng.unit_vector(m) * rng.uniform(0.0, dmax);
    return quadfree::make_case_data(lambda, a, d, true);
  }
}

/// Random unit vector for which aᵀλ + dᵀβ has the requested sign (strict when negative).
inline VectorXd random_beta(quadfree::SplitMix64& rng, const quadfree::CaseData& cd, bool want_negative) {
  for (int tries = 0; tries < 100000; ++tries) {
    VectorXd beta = rng.unit_vector(cd.m());
    const double v = cd.la + cd.d.dot(beta);
    if (want_negative ? v < -1e-6 : v >= 1e-6) return beta;
  }
  return VectorXd();
}

}  // namespace fixtures

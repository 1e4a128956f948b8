#pragma once

#include <limits>

#include <Eigen/Dense>

namespace quadfree {

using Eigen::VectorXd;

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// λ, a, d plus cached scalars. Build through make_case_data.
struct CaseData {
  VectorXd lambda;
  VectorXd a;
  VectorXd d;
  double la = 0.0;     // λᵀa
  double dnorm = 0.0;  // ‖d‖
  bool normalized = false;

  int n() const { return static_cast<int>(lambda.size()); }
  int m() const { return static_cast<int>(d.size()); }
  /// λ = −a, where r ≡ 0 and φ(y) = ‖y‖.
  bool lambda_neg_a() const;
};

/// Validates ‖λ‖ = 1 (NotUnit). With `normalized`, also requires ‖a‖ = 1,
/// ‖d‖ <= 1 and λ != a (PreconditionViolated).
CaseData make_case_data(const VectorXd& lambda, const VectorXd& a, const VectorXd& d, bool normalized);

/// max { λᵀx : ‖x‖ <= ‖y‖, aᵀx + dᵀy <= 0 }.
double phi_value(const CaseData& cd, const VectorXd& y);

/// Throws UndefinedGradient at y = 0 and on the ray where ‖y‖ = |dᵀy| in the second branch.
VectorXd phi_gradient(const CaseData& cd, const VectorXd& y);

/// Dual multiplier of the constraint aᵀx + dᵀy <= 0; may be +infinity.
double theta_dual(const CaseData& cd, const VectorXd& y);

/// Dual objective ‖λ − θa‖‖y‖ − θdᵀy. For θ = +infinity returns the limit.
double dual_objective(const CaseData& cd, const VectorXd& y, double theta);

double r_coefficient(const CaseData& cd, const VectorXd& beta);

/// Maximizer of the problem defining φ.
VectorXd x_beta(const CaseData& cd, const VectorXd& y);

struct GMembership {
  bool member = false;
  bool strict = false;
};

/// β ∈ G(λ) = { ‖β‖ = 1, aᵀλ + dᵀβ <= 0 }.
GMembership in_G(const CaseData& cd, const VectorXd& beta, double tol = 1e-12);

/// max { βᵀy : ‖β‖ = 1, ℓ + dᵀβ <= 0 }, −infinity when the feasible set is empty.
/// For m = 1 the feasible set is a subset of {−1, +1}.
double cap_support(double ell, const VectorXd& d, const VectorXd& y);

/// Value of βᵀu maximized over the circle section dᵀβ = −ℓ (requires ‖d‖ > 0, |ℓ| <= ‖d‖).
double section_support(double ell, const VectorXd& d, const VectorXd& u);

void require_unit(const VectorXd& beta, double tol = 1e-10);

}  // namespace quadfree

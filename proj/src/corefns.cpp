#include "quadfree/corefns.hpp"

#include <algorithm>
#include <cmath>

#include "quadfree/errors.hpp"

namespace quadfree {

namespace {

void require_normalized(const CaseData& cd) {
  if (!cd.normalized)
    throw Error(ErrorCode::PreconditionViolated, "phi machinery requires |a| = 1 (Case 2 data)");
}

void require_dim(const CaseData& cd, const VectorXd& y) {
  if (y.size() != cd.d.size()) throw Error(ErrorCode::InvalidArgument, "y has wrong dimension");
}

bool first_branch(const CaseData& cd, double ny, double dy) { return cd.la * ny + dy <= 0.0; }

double one_minus_la2(const CaseData& cd) { return std::max(0.0, 1.0 - cd.la * cd.la); }

}  // namespace

bool CaseData::lambda_neg_a() const { return (lambda + a).norm() <= 1e-12; }

void require_unit(const VectorXd& beta, double tol) {
  if (std::abs(beta.norm() - 1.0) > tol) throw Error(ErrorCode::NotUnit, "vector is not unit length", beta.norm());
}

CaseData make_case_data(const VectorXd& lambda, const VectorXd& a, const VectorXd& d, bool normalized) {
  if (lambda.size() != a.size() || lambda.size() == 0)
    throw Error(ErrorCode::InvalidArgument, "lambda and a must have equal positive dimension");
  require_unit(lambda, 1e-12);
  CaseData cd;
  cd.lambda = lambda;
  cd.a = a;
  cd.d = d;
  cd.la = lambda.dot(a);
  cd.dnorm = d.norm();
  cd.normalized = normalized;
  if (normalized) {
    if (std::abs(a.norm() - 1.0) > 1e-10) throw Error(ErrorCode::PreconditionViolated, "|a| must be 1");
    if (cd.dnorm > 1.0 + 1e-12) throw Error(ErrorCode::PreconditionViolated, "|d| must not exceed 1");
    if ((lambda - a).norm() <= 1e-12) throw Error(ErrorCode::PreconditionViolated, "lambda = a is excluded");
  }
  return cd;
}

double phi_value(const CaseData& cd, const VectorXd& y) {
  require_normalized(cd);
  require_dim(cd, y);
  const double ny = y.norm();
  const double dy = cd.d.dot(y);
  if (first_branch(cd, ny, dy)) return ny;
  return std::sqrt(std::max(0.0, ny * ny - dy * dy) * one_minus_la2(cd)) - dy * cd.la;
}

VectorXd phi_gradient(const CaseData& cd, const VectorXd& y) {
  require_normalized(cd);
  require_dim(cd, y);
  const double ny = y.norm();
  if (ny == 0.0) throw Error(ErrorCode::UndefinedGradient, "gradient undefined at y = 0");
  const double dy = cd.d.dot(y);
  if (first_branch(cd, ny, dy)) return y / ny;
  const double w2 = ny * ny - dy * dy;
  if (w2 <= 1e-24 * ny * ny) throw Error(ErrorCode::UndefinedGradient, "gradient undefined on the ray of d");
  return std::sqrt(one_minus_la2(cd)) * (y - cd.d * dy) / std::sqrt(w2) - cd.la * cd.d;
}

double theta_dual(const CaseData& cd, const VectorXd& y) {
  require_normalized(cd);
  require_dim(cd, y);
  const double ny = y.norm();
  const double dy = cd.d.dot(y);
  if (first_branch(cd, ny, dy)) return 0.0;
  const double w2 = ny * ny - dy * dy;
  if (w2 <= 0.0) return kInfinity;
  return std::max(0.0, cd.la + dy * std::sqrt(one_minus_la2(cd)) / std::sqrt(w2));
}

double dual_objective(const CaseData& cd, const VectorXd& y, double theta) {
  if (std::isinf(theta)) return -cd.la * y.norm();
  return (cd.lambda - theta * cd.a).norm() * y.norm() - theta * cd.d.dot(y);
}

double r_coefficient(const CaseData& cd, const VectorXd& beta) {
  require_normalized(cd);
  require_dim(cd, beta);
  require_unit(beta);
  if (cd.lambda_neg_a()) return 0.0;
  const double db = cd.d.dot(beta);
  if (cd.la + db <= 0.0) return 0.0;
  const double ph = phi_value(cd, beta);
  const double den = ph + db * cd.la;
  if (!(den > 0.0)) throw Error(ErrorCode::PreconditionViolated, "r(beta) denominator vanished");
  return (db + cd.la * ph) / den;
}

VectorXd x_beta(const CaseData& cd, const VectorXd& y) {
  require_normalized(cd);
  require_dim(cd, y);
  const double ny = y.norm();
  const double dy = cd.d.dot(y);
  if (first_branch(cd, ny, dy)) return cd.lambda * ny;
  const double k = one_minus_la2(cd);
  if (k <= 0.0) throw Error(ErrorCode::PreconditionViolated, "lambda parallel to a");
  const double S = std::sqrt(std::max(0.0, ny * ny - dy * dy) / k);
  return S * cd.lambda - (dy + cd.la * S) * cd.a;
}

GMembership in_G(const CaseData& cd, const VectorXd& beta, double tol) {
  require_dim(cd, beta);
  require_unit(beta);
  const double v = cd.la + cd.d.dot(beta);
  return {v <= tol, v < -tol};
}

double section_support(double ell, const VectorXd& d, const VectorXd& u) {
  const double nd2 = d.squaredNorm();
  const double du = d.dot(u);
  const double r = std::max(0.0, 1.0 - ell * ell / nd2);
  const double perp = std::max(0.0, u.squaredNorm() - du * du / nd2);
  return -ell * du / nd2 + std::sqrt(r * perp);
}

double cap_support(double ell, const VectorXd& d, const VectorXd& y) {
  if (d.size() == 1) {
    double best = -kInfinity;
    for (double b : {-1.0, 1.0})
      if (ell + d[0] * b <= 0.0) best = std::max(best, b * y[0]);
    return best;
  }
  const double nd = d.norm();
  if (ell > nd) return -kInfinity;
  const double ny = y.norm();
  if (ell * ny + d.dot(y) <= 0.0 || nd == 0.0) return ny;
  return section_support(ell, d, y);
}

}  // namespace quadfree

#include "quadfree/freesets.hpp"

#include <algorithm>
#include <cmath>

#include "quadfree/errors.hpp"

namespace quadfree {

namespace {

// max over β ∈ A2 = { ℓ + dᵀβ >= 0 } of ∇φ(β)ᵀu.
double upper_support(const CaseData& cd, const VectorXd& u) {
  if (cd.m() == 1) {
    double best = -kInfinity;
    for (double b : {-1.0, 1.0}) {
      if (cd.la + cd.d[0] * b < 0.0) continue;
      VectorXd beta(1);
      beta[0] = b;
      best = std::max(best, phi_gradient(cd, beta)[0] * u[0]);
    }
    return best;
  }
  if (cd.la < -cd.dnorm) return -kInfinity;
  if (cd.la * u.norm() + cd.d.dot(u) >= 0.0) return phi_value(cd, u);
  return section_support(cd.la, cd.d, u);
}

double relaxed_phi_margin(const CaseData& cd, const VectorXd& x, const VectorXd& y) {
  const double k = 1.0 - cd.dnorm * cd.dnorm;
  const double lower = cap_support(cd.la, cd.d, y) - cd.lambda.dot(x);
  const double upper = upper_support(cd, y - cd.d / k) - cd.lambda.dot(x + cd.a / k);
  return std::max(lower, upper);
}

bool needs_phi(FreeSetKind kind) { return kind == FreeSetKind::CPhiLambda || kind == FreeSetKind::CRPhiLambda; }

}  // namespace

const char* to_string(FreeSetKind kind) {
  switch (kind) {
    case FreeSetKind::CLambda: return "CLambda";
    case FreeSetKind::CGLambda: return "CGLambda";
    case FreeSetKind::CPhiLambda: return "CPhiLambda";
    case FreeSetKind::CRPhiLambda: return "CRPhiLambda";
    case FreeSetKind::Halfspace: return "Halfspace";
    case FreeSetKind::CylinderLift: return "CylinderLift";
  }
  return "?";
}

FreeSetKind free_set_kind_from_string(const std::string& name) {
  for (auto k : {FreeSetKind::CLambda, FreeSetKind::CGLambda, FreeSetKind::CPhiLambda, FreeSetKind::CRPhiLambda,
                 FreeSetKind::Halfspace, FreeSetKind::CylinderLift})
    if (name == to_string(k)) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown free set kind '" + name + "'");
}

FreeSet make_free_set(FreeSetKind kind, const CaseData& cd, int l) {
  if (kind == FreeSetKind::Halfspace || kind == FreeSetKind::CylinderLift)
    throw Error(ErrorCode::InvalidArgument, "use make_halfspace or make_cylinder");
  if (needs_phi(kind) && !cd.normalized)
    throw Error(ErrorCode::PreconditionViolated, std::string(to_string(kind)) + " requires |a| = 1");
  if (kind == FreeSetKind::CRPhiLambda && !(cd.dnorm < 1.0))
    throw Error(ErrorCode::PreconditionViolated, "CRPhiLambda requires |d| < 1");
  if (kind == FreeSetKind::CGLambda && cd.m() < 1)
    throw Error(ErrorCode::PreconditionViolated, "CGLambda requires m >= 1");
  FreeSet fs;
  fs.kind = kind;
  fs.n = cd.n();
  fs.m = cd.m();
  fs.l = l;
  fs.cd = cd;
  return fs;
}

FreeSet make_halfspace(int n, int m, int l, VectorXd coef, double rhs) {
  if (coef.size() != n + m + l) throw Error(ErrorCode::InvalidArgument, "halfspace coefficient has wrong length");
  FreeSet fs;
  fs.kind = FreeSetKind::Halfspace;
  fs.n = n;
  fs.m = m;
  fs.l = l;
  fs.coef = std::move(coef);
  fs.rhs = rhs;
  return fs;
}

FreeSet make_cylinder(FreeSet inner) {
  FreeSet fs;
  fs.kind = FreeSetKind::CylinderLift;
  fs.n = inner.n;
  fs.m = inner.m;
  fs.l = inner.l;
  fs.cd = inner.cd;
  fs.inner = std::make_shared<const FreeSet>(std::move(inner));
  return fs;
}

FreeSet build_free_set(const CanonicalForm& cf) {
  switch (cf.tag) {
    case CaseTag::NotSeparable:
      throw Error(ErrorCode::NotSeparable, "point is not separable", cf.q_value);
    case CaseTag::EmptyS:
      return make_halfspace(cf.n, cf.m, cf.l, VectorXd::Zero(cf.n + cf.m + cf.l), 1.0);
    case CaseTag::HomogHNonzero:
      return make_cylinder(make_free_set(FreeSetKind::CLambda, make_case_data(cf.lambda, cf.a, cf.d, false), cf.l));
    case CaseTag::Case1CGLambda:
      return build_free_set(cf, FreeSetKind::CGLambda);
    case CaseTag::ConvexM1: {
      // On H the set S lies in the cone ‖x‖ <= −σy, σ = sign(d); the halfspace
      // λᵀx + σy >= 0 supports it at μ(λ, −σ), μ = 1/(|d| − aᵀλ).
      const double sigma = cf.d[0] >= 0.0 ? 1.0 : -1.0;
      VectorXd coef = VectorXd::Zero(cf.n + cf.m + cf.l);
      coef.head(cf.n) = -cf.lambda;
      coef[cf.n] = -sigma;
      return make_halfspace(cf.n, cf.m, cf.l, std::move(coef), 0.0);
    }
    case CaseTag::Case2CR:
      return build_free_set(cf, FreeSetKind::CRPhiLambda);
    case CaseTag::Case2CRLambdaNegA:
      return build_free_set(cf, FreeSetKind::CPhiLambda);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown case tag");
}

FreeSet build_free_set(const CanonicalForm& cf, FreeSetKind kind) {
  if (kind == FreeSetKind::Halfspace || kind == FreeSetKind::CylinderLift) {
    FreeSet fs = build_free_set(cf);
    if (fs.kind != kind)
      throw Error(ErrorCode::PreconditionViolated,
                  std::string(to_string(kind)) + " is not the built family for case " + to_string(cf.tag));
    return fs;
  }
  const bool case2 = cf.tag == CaseTag::Case2CR || cf.tag == CaseTag::Case2CRLambdaNegA;
  if (needs_phi(kind) && !case2)
    throw Error(ErrorCode::PreconditionViolated,
                std::string(to_string(kind)) + " needs Case 2 data, got " + to_string(cf.tag));
  return make_free_set(kind, make_case_data(cf.lambda, cf.a, cf.d, case2), cf.l);
}

double margin(const FreeSet& fs, const VectorXd& w) {
  if (w.size() != fs.dim()) throw Error(ErrorCode::InvalidArgument, "point has wrong dimension");
  const VectorXd x = w.head(fs.n);
  const VectorXd y = w.segment(fs.n, fs.m);
  switch (fs.kind) {
    case FreeSetKind::CLambda:
      return y.norm() - fs.cd.lambda.dot(x);
    case FreeSetKind::CGLambda:
      if (fs.cd.dnorm == 0.0) return y.norm() - fs.cd.lambda.dot(x);
      return cap_support(fs.cd.la, fs.cd.d, y) - fs.cd.lambda.dot(x);
    case FreeSetKind::CPhiLambda:
      return phi_value(fs.cd, y) - fs.cd.lambda.dot(x);
    case FreeSetKind::CRPhiLambda:
      return relaxed_phi_margin(fs.cd, x, y);
    case FreeSetKind::Halfspace:
      return fs.coef.dot(w) - fs.rhs;
    case FreeSetKind::CylinderLift:
      return margin(*fs.inner, w);
  }
  return 0.0;
}

StepLength boundary_step(const FreeSet& fs, const VectorXd& apex, const VectorXd& ray, double tol) {
  if (ray.size() != apex.size()) throw Error(ErrorCode::InvalidArgument, "ray and apex differ in dimension");
  if (!(ray.norm() > 0.0)) throw Error(ErrorCode::InvalidArgument, "ray must be nonzero");
  const double m0 = margin(fs, apex);
  if (!(m0 < -tol)) throw Error(ErrorCode::ApexNotInterior, "apex is not strictly interior", m0);

  auto at = [&](double t) { return margin(fs, apex + t * ray); };
  double lo = 0.0;
  double hi = 1.0;
  while (at(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kStepCap) {
      if (at(kStepCap) < 0.0) return {kInfinity, 0.0};
      hi = kStepCap;
      break;
    }
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (at(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, at(lo)};
}

}  // namespace quadfree

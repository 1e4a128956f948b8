#include "quadfree/cuts.hpp"

#include <cmath>

#include "quadfree/errors.hpp"

namespace quadfree {

SimplicialCone make_cone(VectorXd apex, MatrixXd R) {
  if (R.rows() != apex.size() || R.cols() != apex.size())
    throw Error(ErrorCode::InvalidArgument, "cone needs p rays of dimension p");
  if (!R.allFinite() || !apex.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite cone data");
  Eigen::JacobiSVD<MatrixXd> svd(R);
  const VectorXd sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  if (!(smin > 0.0) || sv[0] / smin > kMaxConeCondition)
    throw Error(ErrorCode::DegenerateCone, "cone rays are (nearly) linearly dependent", smin > 0 ? sv[0] / smin : kInfinity);
  return {std::move(apex), std::move(R)};
}

CutCertificate intersection_cut(const SimplicialCone& cone, const CanonicalForm& cf, const FreeSet& fs, double tol) {
  const int p = cf.p;
  if (cone.apex.size() != p) throw Error(ErrorCode::InvalidArgument, "cone and constraint differ in dimension");
  const VectorXd w_apex = cf.map(cone.apex);
  const double m0 = margin(fs, w_apex);
  if (!(m0 < -tol)) throw Error(ErrorCode::ApexNotInterior, "mapped apex is not interior to the free set", m0);

  CutCertificate cert;
  cert.apex_margin = m0;
  cert.weights = VectorXd::Zero(p);
  const MatrixXd L = cf.linear_part();
  bool any_finite = false;
  for (int j = 0; j < p; ++j) {
    const StepLength st = boundary_step(fs, w_apex, L * cone.R.col(j), tol);
    cert.steps.push_back(st);
    if (!st.infinite()) {
      cert.weights[j] = 1.0 / st.value;
      any_finite = true;
    }
  }
  if (!any_finite) throw Error(ErrorCode::AllRaysRecession, "every cone ray is a recession direction of the free set");

  // Σ_j π_j μ_j >= 1 with μ = R⁻¹(s − apex), written as coefᵀs <= rhs.
  const VectorXd u = cone.R.transpose().partialPivLu().solve(cert.weights);
  cert.coef = -u;
  cert.rhs = -1.0 + cert.coef.dot(cone.apex);
  cert.violation = cert.coef.dot(cone.apex) - cert.rhs;
  cert.canonical = cf;
  cert.free_set = fs;
  return cert;
}

CutCertificate separate(const QuadraticConstraint& qc, const SimplicialCone& cone, Transform transform,
                        double zero_tol) {
  const CanonicalForm cf = canonicalize(qc, zero_tol, transform);
  if (cf.tag == CaseTag::NotSeparable)
    throw Error(ErrorCode::NotSeparable, "q(point) <= 0: nothing to separate", cf.q_value);
  if (cf.tag == CaseTag::EmptyS) throw Error(ErrorCode::EmptyS, "the constraint set is empty");
  return intersection_cut(cone, cf, build_free_set(cf));
}

}  // namespace quadfree

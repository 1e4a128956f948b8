#pragma once

#include <vector>

#include "quadfree/freesets.hpp"
#include "quadfree/spectral.hpp"

namespace quadfree {

/// apex + cone(R) with R square and well conditioned.
struct SimplicialCone {
  VectorXd apex;
  MatrixXd R;  // rays as columns
};

constexpr double kMaxConeCondition = 1e10;

/// Throws DegenerateCone when R is singular or its condition number exceeds 1e10.
SimplicialCone make_cone(VectorXd apex, MatrixXd R);

/// Cut coefᵀs <= rhs, violated by the apex.
struct CutCertificate {
  std::vector<StepLength> steps;
  /// Multiplier-space weights 1/t_j (0 for infinite steps).
  VectorXd weights;
  VectorXd coef;
  double rhs = 0.0;
  /// coefᵀapex − rhs.
  double violation = 0.0;
  double apex_margin = 0.0;
  CanonicalForm canonical;
  FreeSet free_set;
};

CutCertificate intersection_cut(const SimplicialCone& cone, const CanonicalForm& cf, const FreeSet& fs,
                                double tol = 1e-9);

/// canonicalize, build_free_set, intersection_cut. The cone apex must be the
/// point stored in qc. Throws NotSeparable, EmptyS or AllRaysRecession.
CutCertificate separate(const QuadraticConstraint& qc, const SimplicialCone& cone,
                        Transform transform = Transform::Centered, double zero_tol = kDefaultZeroTol);

}  // namespace quadfree

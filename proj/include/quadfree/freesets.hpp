#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "quadfree/corefns.hpp"
#include "quadfree/spectral.hpp"

namespace quadfree {

enum class FreeSetKind { CLambda, CGLambda, CPhiLambda, CRPhiLambda, Halfspace, CylinderLift };

const char* to_string(FreeSetKind kind);
/// Parses the names produced by to_string; throws InvalidArgument.
FreeSetKind free_set_kind_from_string(const std::string& name);

/// A convex set in w = (x, y, z) space, described by a margin function that is
/// negative in the interior. Only the first n + m coordinates matter except
/// for Halfspace.
struct FreeSet {
  FreeSetKind kind = FreeSetKind::CLambda;
  int n = 0;
  int m = 0;
  int l = 0;
  CaseData cd;
  /// Halfspace coefᵀw <= rhs, over all n + m + l coordinates.
  VectorXd coef;
  double rhs = 0.0;
  /// CylinderLift only.
  std::shared_ptr<const FreeSet> inner;

  int dim() const { return n + m + l; }
};

FreeSet make_free_set(FreeSetKind kind, const CaseData& cd, int l = 0);
FreeSet make_halfspace(int n, int m, int l, VectorXd coef, double rhs);
FreeSet make_cylinder(FreeSet inner);

/// The maximal set for the case tag of `cf`.
FreeSet build_free_set(const CanonicalForm& cf);

/// A specific family on the data of `cf`, regardless of the case tag. Families
/// built on φ require Case 2 data (|a| = 1).
FreeSet build_free_set(const CanonicalForm& cf, FreeSetKind kind);

double margin(const FreeSet& fs, const VectorXd& w);

struct StepLength {
  double value = 0.0;
  double residual = 0.0;
  bool infinite() const { return std::isinf(value); }
};

constexpr double kStepCap = 1e12;

/// sup { t >= 0 : apex + t·ray ∈ fs }, located by doubling then bisection.
/// Returns the inner bracket end so the reported point is never outside.
StepLength boundary_step(const FreeSet& fs, const VectorXd& apex, const VectorXd& ray, double tol = 1e-9);

}  // namespace quadfree

#pragma once

#include <string>

#include <Eigen/Dense>

namespace quadfree {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// The inequality sᵀQs + bᵀs + c <= 0 together with the point to separate.
struct QuadraticConstraint {
  MatrixXd Q;
  VectorXd b;
  double c = 0.0;
  VectorXd point;

  int dim() const { return static_cast<int>(b.size()); }
  double evaluate(const VectorXd& s) const { return s.dot(Q * s) + b.dot(s) + c; }
};

/// Checks dimensions and symmetry; returns a copy with Q symmetrized.
/// Throws NonSymmetric or InvalidArgument.
QuadraticConstraint make_constraint(MatrixXd Q, VectorXd b, double c, VectorXd point);

struct EigenDecomposition {
  MatrixXd vectors;  // orthonormal columns
  VectorXd values;   // descending
};

/// Cyclic Jacobi with threshold sweeps. Deterministic for a fixed input.
EigenDecomposition jacobi_eigen(const MatrixXd& A);

/// Q̃ = [[Q, b/2], [bᵀ/2, c]] so that (s,1)ᵀ Q̃ (s,1) = q(s).
MatrixXd lift(const MatrixXd& Q, const VectorXd& b, double c);

enum class CaseTag {
  HomogHNonzero,
  Case1CGLambda,
  ConvexM1,
  Case2CR,
  Case2CRLambdaNegA,
  EmptyS,
  NotSeparable,
};

const char* to_string(CaseTag tag);

/// Which change of variables brings q to ‖x‖² − ‖y‖².
enum class Transform {
  /// Eigendecompose Q, complete squares, then homogenize the constant
  /// (or a kernel linear term) into its own coordinates.
  Centered,
  /// Eigendecompose the lifted matrix Q̃ directly.
  Lifted,
};

const char* to_string(Transform t);

struct ScaleRecord {
  /// Square roots of the |eigenvalues| used on each w-row before the final
  /// rescale (1 for rows that were not eigen-scaled).
  VectorXd row_scale;
  /// Factor applied to the (x, y) rows so that ‖a‖ = 1 (Case 2 only).
  double xy_rescale = 1.0;
  /// Constant left after completing squares (centered transform only).
  double constant = 0.0;
  /// True if a kernel linear term was homogenized as a difference of squares.
  bool linear_kernel_term = false;
};

/// Canonical coordinates w = M (s, 1), split as (x ∈ Rⁿ, y ∈ Rᵐ, z ∈ Rˡ),
/// in which q(s) = scale⁻² (‖x‖² − ‖y‖²) and aᵀx + dᵀy + hᵀz = −1.
struct CanonicalForm {
  int p = 0;
  int n = 0;
  int m = 0;
  int l = 0;
  Transform transform = Transform::Centered;
  MatrixXd M;
  MatrixXd Minv;
  VectorXd a;
  VectorXd d;
  VectorXd h;
  VectorXd mapped_point;
  VectorXd lambda;
  CaseTag tag = CaseTag::NotSeparable;
  double q_value = 0.0;
  double zero_tol = 1e-9;
  ScaleRecord scale;

  VectorXd map(const VectorXd& s) const;
  /// Linear part of the map (first p columns of M).
  MatrixXd linear_part() const { return M.leftCols(p); }
  VectorXd x_of(const VectorXd& w) const { return w.head(n); }
  VectorXd y_of(const VectorXd& w) const { return w.segment(n, m); }
  VectorXd z_of(const VectorXd& w) const { return w.tail(l); }
  bool separable() const { return tag != CaseTag::NotSeparable; }
};

constexpr double kDefaultZeroTol = 1e-9;

CanonicalForm canonicalize(const QuadraticConstraint& qc, double zero_tol = kDefaultZeroTol,
                           Transform transform = Transform::Centered);

/// Canonical data given directly in w-coordinates (M = I), as in worked
/// examples that start from the form ‖x‖ <= ‖y‖, aᵀx + dᵀy + hᵀz = −1.
/// The case tag is dispatched as in canonicalize, including the Case 2 rescale.
CanonicalForm canonical_from_hyperplane(const VectorXd& a, const VectorXd& d, const VectorXd& h,
                                        const VectorXd& lambda, double zero_tol = kDefaultZeroTol);

struct LinearInequality {
  VectorXd coef;
  double rhs = 0.0;
};

/// Maps αᵀw <= β in canonical space to coefᵀs <= rhs in the original space.
LinearInequality pullback_linear(const CanonicalForm& cf, const VectorXd& alpha, double beta);

}  // namespace quadfree

#include "quadfree/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "quadfree/errors.hpp"

namespace quadfree {

namespace {

constexpr int kMaxJacobiDim = 64;
constexpr int kMaxSweeps = 100;

double max_abs(const MatrixXd& A) { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

void require_symmetric(const MatrixXd& A) {
  if (A.rows() != A.cols()) throw Error(ErrorCode::InvalidArgument, "matrix is not square");
  double asym = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = i + 1; j < A.cols(); ++j) asym = std::max(asym, std::abs(A(i, j) - A(j, i)));
  if (asym > 1e-12 * (1.0 + max_abs(A)))
    throw Error(ErrorCode::NonSymmetric, "matrix asymmetry " + std::to_string(asym) + " exceeds tolerance");
}

// Householder reflector H with H·u = ±‖u‖e₀; the remaining columns of H span u⊥.
MatrixXd householder_basis(const VectorXd& u) {
  const Eigen::Index k = u.size();
  VectorXd v = u / u.norm();
  v[0] += (v[0] >= 0.0 ? 1.0 : -1.0);
  return MatrixXd::Identity(k, k) - 2.0 * v * v.transpose() / v.squaredNorm();
}

enum class Block { X, Y, Z };

struct MapRow {
  Eigen::RowVectorXd coeffs;  // acts on (s, 1)
  Block block;
  double scale;
};

std::vector<MapRow> centered_rows(const QuadraticConstraint& qc, double zero_tol, ScaleRecord& rec) {
  const int p = qc.dim();
  const EigenDecomposition eig = jacobi_eigen(qc.Q);
  const double maxeig = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double thr = zero_tol * maxeig;
  const VectorXd bt = eig.vectors.transpose() * qc.b;

  std::vector<MapRow> pos, neg, ker;
  std::vector<int> zero_idx;
  double constant = qc.c;
  double shift_mag = 0.0;
  for (int i = 0; i < p; ++i) {
    const double e = eig.values[i];
    if (std::abs(e) > thr && e != 0.0) {
      const double s = std::sqrt(std::abs(e));
      Eigen::RowVectorXd row(p + 1);
      row.head(p) = s * eig.vectors.col(i).transpose();
      row[p] = s * bt[i] / (2.0 * e);
      const double shift = bt[i] * bt[i] / (4.0 * e);
      constant -= shift;
      shift_mag += std::abs(shift);
      (e > 0 ? pos : neg).push_back({row, e > 0 ? Block::X : Block::Y, s});
    } else {
      zero_idx.push_back(i);
    }
  }
  // Negative eigenvalues arrive ascending in magnitude; list the largest first.
  std::reverse(neg.begin(), neg.end());

  VectorXd bz(static_cast<Eigen::Index>(zero_idx.size()));
  MatrixXd Vz(p, static_cast<Eigen::Index>(zero_idx.size()));
  for (std::size_t j = 0; j < zero_idx.size(); ++j) {
    bz[j] = bt[zero_idx[j]];
    Vz.col(j) = eig.vectors.col(zero_idx[j]);
  }

  rec.constant = constant;
  std::vector<MapRow> rows;
  const double tol_b = zero_tol * std::max(1.0, qc.b.norm());
  if (bz.size() > 0 && bz.norm() > tol_b) {
    // kᵀs + c' = ξ² − η² with ξ = (kᵀs + c' + 1)/2, η = (kᵀs + c' − 1)/2.
    rec.linear_kernel_term = true;
    const VectorXd k = Vz * bz;
    Eigen::RowVectorXd xi(p + 1), eta(p + 1);
    xi.head(p) = 0.5 * k.transpose();
    eta.head(p) = 0.5 * k.transpose();
    xi[p] = 0.5 * (constant + 1.0);
    eta[p] = 0.5 * (constant - 1.0);
    const MatrixXd H = householder_basis(bz);
    const MatrixXd rest = Vz * H.rightCols(bz.size() - 1);
    for (const auto& r : pos) rows.push_back(r);
    rows.push_back({xi, Block::X, 1.0});
    for (const auto& r : neg) rows.push_back(r);
    rows.push_back({eta, Block::Y, 1.0});
    for (Eigen::Index j = 0; j < rest.cols(); ++j) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(p + 1);
      row.head(p) = rest.col(j).transpose();
      rows.push_back({row, Block::Z, 1.0});
    }
    return rows;
  }

  for (Eigen::Index j = 0; j < Vz.cols(); ++j) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(p + 1);
    row.head(p) = Vz.col(j).transpose();
    ker.push_back({row, Block::Z, 1.0});
  }
  const double tol_c = zero_tol * (1.0 + std::abs(qc.c) + shift_mag);
  Eigen::RowVectorXd crow = Eigen::RowVectorXd::Zero(p + 1);
  for (const auto& r : pos) rows.push_back(r);
  if (constant > tol_c) {
    crow[p] = std::sqrt(constant);
    rows.push_back({crow, Block::X, std::sqrt(constant)});
  }
  for (const auto& r : neg) rows.push_back(r);
  if (constant < -tol_c) {
    crow[p] = std::sqrt(-constant);
    rows.push_back({crow, Block::Y, std::sqrt(-constant)});
  }
  for (const auto& r : ker) rows.push_back(r);
  if (std::abs(constant) <= tol_c) {
    crow[p] = 1.0;
    rows.push_back({crow, Block::Z, 1.0});
  }
  return rows;
}

std::vector<MapRow> lifted_rows(const QuadraticConstraint& qc, double zero_tol) {
  const MatrixXd Qt = lift(qc.Q, qc.b, qc.c);
  const EigenDecomposition eig = jacobi_eigen(Qt);
  const double thr = zero_tol * eig.values.cwiseAbs().maxCoeff();
  std::vector<MapRow> pos, neg, ker;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double e = eig.values[i];
    const bool nonzero = std::abs(e) > thr && e != 0.0;
    const double s = nonzero ? std::sqrt(std::abs(e)) : 1.0;
    MapRow row{s * eig.vectors.col(i).transpose(), Block::Z, s};
    if (nonzero && e > 0) {
      row.block = Block::X;
      pos.push_back(row);
    } else if (nonzero) {
      row.block = Block::Y;
      neg.push_back(row);
    } else {
      ker.push_back(row);
    }
  }
  std::reverse(neg.begin(), neg.end());
  std::vector<MapRow> rows;
  for (auto* part : {&pos, &neg, &ker})
    for (const auto& r : *part) rows.push_back(r);
  return rows;
}

// Sets cf.tag from (a, d, h, n, m); in Case 2 rescales (x, y) so that |a| = 1.
void classify(CanonicalForm& cf, double gnorm, bool not_separable) {
  const double zero_tol = cf.zero_tol;
  const double gtol = zero_tol * std::max(1.0, gnorm);
  if (not_separable || cf.n == 0) {
    cf.tag = CaseTag::NotSeparable;
    return;
  }
  if (cf.m == 0) {
    cf.tag = cf.h.norm() > gtol ? CaseTag::HomogHNonzero : CaseTag::EmptyS;
    return;
  }
  if (cf.h.norm() > gtol) {
    cf.tag = CaseTag::HomogHNonzero;
    return;
  }
  const double na = cf.a.norm();
  const double nd = cf.d.norm();
  if (na <= nd + gtol) {
    cf.tag = cf.m > 1 ? CaseTag::Case1CGLambda : CaseTag::ConvexM1;
    return;
  }
  cf.M.topRows(cf.n + cf.m) *= na;
  cf.Minv.leftCols(cf.n + cf.m) /= na;
  cf.scale.xy_rescale = na;
  cf.a /= na;
  cf.d /= na;
  cf.tag = (cf.lambda + cf.a).norm() <= std::max(zero_tol, 1e-12) ? CaseTag::Case2CRLambdaNegA : CaseTag::Case2CR;
}

}  // namespace

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::HomogHNonzero: return "HOMOG_H_NONZERO";
    case CaseTag::Case1CGLambda: return "CASE1_CGLAMBDA";
    case CaseTag::ConvexM1: return "CONVEX_M1";
    case CaseTag::Case2CR: return "CASE2_CR";
    case CaseTag::Case2CRLambdaNegA: return "CASE2_CR_LAMBDA_NEG_A";
    case CaseTag::EmptyS: return "EMPTY_S";
    case CaseTag::NotSeparable: return "NOT_SEPARABLE";
  }
  return "?";
}

const char* to_string(Transform t) { return t == Transform::Centered ? "centered" : "lifted"; }

QuadraticConstraint make_constraint(MatrixXd Q, VectorXd b, double c, VectorXd point) {
  const Eigen::Index p = b.size();
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (Q.rows() != p || Q.cols() != p || point.size() != p)
    throw Error(ErrorCode::InvalidArgument, "inconsistent dimensions");
  if (!Q.allFinite() || !b.allFinite() || !point.allFinite() || !std::isfinite(c))
    throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
  require_symmetric(Q);
  QuadraticConstraint qc;
  qc.Q = 0.5 * (Q + Q.transpose());
  qc.b = std::move(b);
  qc.c = c;
  qc.point = std::move(point);
  return qc;
}

EigenDecomposition jacobi_eigen(const MatrixXd& A_in) {
  require_symmetric(A_in);
  const Eigen::Index N = A_in.rows();
  if (N > kMaxJacobiDim) throw Error(ErrorCode::InvalidArgument, "jacobi_eigen supports dimension <= 64");

  MatrixXd A = 0.5 * (A_in + A_in.transpose());
  MatrixXd V = MatrixXd::Identity(N, N);
  const double anorm = A.norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = i + 1; j < N; ++j) s += 2.0 * A(i, j) * A(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    const double off = off_norm();
    if (off <= 1e-12 * anorm || off == 0.0) break;
    // Threshold pass: skip rotations on entries that are already small
    // relative to the remaining off-diagonal mass during early sweeps.
    const double thresh = sweep < 3 ? 0.2 * off / static_cast<double>(N * N) : 0.0;
    for (Eigen::Index p = 0; p < N - 1; ++p) {
      for (Eigen::Index q = p + 1; q < N; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= thresh || apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < N; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < N; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        A(p, q) = A(q, p) = 0.0;
        for (Eigen::Index k = 0; k < N; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps && off_norm() > 1e-12 * anorm)
    throw Error(ErrorCode::NoConvergence, "Jacobi iteration did not converge in 100 sweeps");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return A(i, i) > A(j, j); });
  EigenDecomposition out;
  out.values.resize(N);
  out.vectors.resize(N, N);
  for (Eigen::Index k = 0; k < N; ++k) {
    out.values[k] = A(order[k], order[k]);
    out.vectors.col(k) = V.col(order[k]);
  }
  return out;
}

MatrixXd lift(const MatrixXd& Q, const VectorXd& b, double c) {
  const Eigen::Index p = b.size();
  MatrixXd Qt(p + 1, p + 1);
  Qt.topLeftCorner(p, p) = Q;
  Qt.topRightCorner(p, 1) = 0.5 * b;
  Qt.bottomLeftCorner(1, p) = 0.5 * b.transpose();
  Qt(p, p) = c;
  return Qt;
}

VectorXd CanonicalForm::map(const VectorXd& s) const { return M.leftCols(p) * s + M.col(p); }

CanonicalForm canonicalize(const QuadraticConstraint& qc, double zero_tol, Transform transform) {
  const int p = qc.dim();
  CanonicalForm cf;
  cf.p = p;
  cf.transform = transform;
  cf.zero_tol = zero_tol;

  const double lifted_scale = max_abs(lift(qc.Q, qc.b, qc.c));
  if (lifted_scale <= zero_tol)
    throw Error(ErrorCode::DegenerateQuadratic, "quadratic is identically zero");

  const std::vector<MapRow> rows =
      transform == Transform::Centered ? centered_rows(qc, zero_tol, cf.scale) : lifted_rows(qc, zero_tol);

  cf.M.resize(p + 1, p + 1);
  cf.scale.row_scale.resize(p + 1);
  for (int i = 0; i < p + 1; ++i) {
    cf.M.row(i) = rows[i].coeffs;
    cf.scale.row_scale[i] = rows[i].scale;
    switch (rows[i].block) {
      case Block::X: ++cf.n; break;
      case Block::Y: ++cf.m; break;
      case Block::Z: ++cf.l; break;
    }
  }
  Eigen::FullPivLU<MatrixXd> lu(cf.M);
  if (!lu.isInvertible()) throw Error(ErrorCode::DegenerateQuadratic, "change of variables is singular");
  cf.Minv = lu.inverse();

  // The homogenizing coordinate of (s, 1) is gᵀw with g the last row of M⁻¹;
  // gᵀw = 1 becomes (−g)ᵀw = −1.
  const VectorXd g = cf.Minv.row(p).transpose();
  cf.a = -g.head(cf.n);
  cf.d = -g.segment(cf.n, cf.m);
  cf.h = -g.tail(cf.l);

  cf.q_value = qc.evaluate(qc.point);
  cf.mapped_point = cf.map(qc.point);
  const VectorXd xbar = cf.mapped_point.head(cf.n);
  cf.lambda = xbar.norm() > 0.0 ? VectorXd(xbar / xbar.norm()) : VectorXd::Zero(cf.n);

  classify(cf, g.norm(), cf.q_value <= zero_tol * std::max(1.0, lifted_scale));
  if (cf.tag == CaseTag::Case2CR || cf.tag == CaseTag::Case2CRLambdaNegA) cf.mapped_point = cf.map(qc.point);
  return cf;
}

CanonicalForm canonical_from_hyperplane(const VectorXd& a, const VectorXd& d, const VectorXd& h,
                                        const VectorXd& lambda, double zero_tol) {
  if (a.size() != lambda.size()) throw Error(ErrorCode::InvalidArgument, "lambda and a differ in dimension");
  if (std::abs(lambda.norm() - 1.0) > 1e-12) throw Error(ErrorCode::NotUnit, "lambda must be unit", lambda.norm());
  CanonicalForm cf;
  cf.n = static_cast<int>(a.size());
  cf.m = static_cast<int>(d.size());
  cf.l = static_cast<int>(h.size());
  cf.p = cf.n + cf.m + cf.l - 1;
  cf.zero_tol = zero_tol;
  cf.M = MatrixXd::Identity(cf.p + 1, cf.p + 1);
  cf.Minv = cf.M;
  cf.a = a;
  cf.d = d;
  cf.h = h;
  cf.lambda = lambda;
  cf.q_value = 1.0;
  cf.scale.row_scale = VectorXd::Ones(cf.p + 1);
  VectorXd g(cf.p + 1);
  g << a, d, h;
  classify(cf, g.norm(), false);
  return cf;
}

LinearInequality pullback_linear(const CanonicalForm& cf, const VectorXd& alpha, double beta) {
  if (alpha.size() != cf.M.rows()) throw Error(ErrorCode::InvalidArgument, "alpha has wrong dimension");
  LinearInequality out;
  out.coef = cf.M.leftCols(cf.p).transpose() * alpha;
  out.rhs = beta - alpha.dot(cf.M.col(cf.p));
  return out;
}

}  // namespace quadfree

#include "loop.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include <Eigen/Dense>

#include "simplex.hpp"

namespace quadfree::cli {

namespace {

void check(qf_status st, const char* what) {
  if (st != QF_OK) throw LoopError(1, std::string(what) + ": " + qf_status_name(st) + ": " + qf_last_error());
}

struct ConstraintHandle {
  qf_constraint* ptr = nullptr;
  ~ConstraintHandle() { qf_constraint_destroy(ptr); }
};

struct CutHandle {
  qf_cut* ptr = nullptr;
  ~CutHandle() { qf_cut_destroy(ptr); }
};

}  // namespace

LoopResult run_loop(const Instance& inst, const LoopOptions& opt,
                    const std::function<void(const LoopIteration&)>& on_iteration) {
  if (!inst.objective || !inst.linear_constraints) throw LoopError(3, "instance needs objective and linear_constraints");
  const int p = inst.dim;
  const auto Q = inst.Q_flat();
  std::vector<LinearConstraint> rows = *inst.linear_constraints;
  LoopResult result;
  double previous = -std::numeric_limits<double>::infinity();

  for (int iter = 0;; ++iter) {
    const LPResult lp = solve_lp(*inst.objective, rows);
    if (lp.status == LPResult::Status::Unbounded) throw LoopError(kExitUnboundedLP, "LP relaxation is unbounded");
    if (lp.status == LPResult::Status::Infeasible) throw LoopError(1, "LP relaxation is infeasible");

    ConstraintHandle qc;
    check(qf_constraint_create(p, Q.data(), inst.b.data(), inst.c, lp.x.data(), &qc.ptr), "constraint");
    double q = 0.0;
    check(qf_constraint_eval(qc.ptr, lp.x.data(), &q), "evaluate");

    LoopIteration it;
    it.iter = iter;
    it.objective = lp.objective;
    it.violation = std::max(0.0, q);
    it.point = lp.x;
    it.pivots = lp.pivots;
    it.monotone = lp.objective >= previous - 1e-9 * (1.0 + std::abs(previous));
    result.monotone = result.monotone && it.monotone;
    previous = lp.objective;

    if (it.violation <= opt.violation_tol || iter >= opt.max_iters) {
      result.converged = it.violation <= opt.violation_tol;
      result.log.push_back(it);
      if (on_iteration) on_iteration(it);
      return result;
    }

    const auto tight = tight_rows(rows, lp.x);
    if (static_cast<int>(tight.size()) != p)
      throw LoopError(kExitDegenerateVertex, "LP vertex has " + std::to_string(tight.size()) +
                                                 " tight constraints, need exactly " + std::to_string(p));
    Eigen::MatrixXd A(p, p);
    for (int r = 0; r < p; ++r) {
      const auto& row = rows[tight[r]];
      const double sign = row.sense == Sense::Ge ? -1.0 : 1.0;
      for (int k = 0; k < p; ++k) A(r, k) = sign * row.coef[k];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) throw LoopError(kExitDegenerateVertex, "tight constraint basis is singular");
    // Ray j leaves tight row j and keeps the others tight.
    const Eigen::MatrixXd R = -lu.inverse();
    std::vector<double> rays(static_cast<std::size_t>(p) * p);
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k) rays[static_cast<std::size_t>(j) * p + k] = R(k, j);

    CutHandle cut;
    const qf_status st = qf_separate(qc.ptr, rays.data(), opt.transform, opt.zero_tol, &cut.ptr);
    if (st == QF_ERR_DEGENERATE_CONE) throw LoopError(kExitDegenerateVertex, qf_last_error());
    check(st, "separate");
    LinearConstraint row;
    row.coef.resize(p);
    check(qf_cut_get(cut.ptr, row.coef.data(), &row.rhs, &it.cut_violation), "cut");
    row.sense = Sense::Le;
    it.cut = row;
    result.log.push_back(it);
    ++result.cuts;
    if (on_iteration) on_iteration(it);
    rows.push_back(std::move(row));
  }
}

}  // namespace quadfree::cli

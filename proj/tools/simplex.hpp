#pragma once

#include <vector>

#include "instance.hpp"

namespace quadfree::cli {

/// Dense two-phase simplex with Bland's rule for min cᵀx over free x
/// subject to the given rows. Demo scale only (a few dozen variables).
struct LPResult {
  enum class Status { Optimal, Infeasible, Unbounded } status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  int pivots = 0;
};

LPResult solve_lp(const std::vector<double>& c, const std::vector<LinearConstraint>& rows);

/// Indices of rows active at x, within a relative tolerance.
std::vector<std::size_t> tight_rows(const std::vector<LinearConstraint>& rows, const std::vector<double>& x,
                                    double tol = 1e-9);

}  // namespace quadfree::cli

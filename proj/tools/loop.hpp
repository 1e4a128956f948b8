#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "instance.hpp"
#include "quadfree/quadfree.h"

namespace quadfree::cli {

/// Carries the process exit code the CLI should use.
struct LoopError : std::runtime_error {
  LoopError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

constexpr int kExitUnboundedLP = 6;
constexpr int kExitDegenerateVertex = 7;

struct LoopOptions {
  int max_iters = 50;
  qf_transform transform = QF_TRANSFORM_CENTERED;
  double zero_tol = 1e-9;
  double violation_tol = 1e-6;
};

struct LoopIteration {
  int iter = 0;
  double objective = 0.0;
  double violation = 0.0;
  std::vector<double> point;
  int pivots = 0;
  bool monotone = true;
  std::optional<LinearConstraint> cut;
  double cut_violation = 0.0;
};

struct LoopResult {
  bool converged = false;
  int cuts = 0;
  bool monotone = true;
  std::vector<LoopIteration> log;
};

/// Minimizes the instance objective over its linear constraints, adding an
/// intersection cut at each LP vertex that violates the quadratic, until the
/// violation drops to violation_tol or max_iters cuts were added.
LoopResult run_loop(const Instance& inst, const LoopOptions& opt,
                    const std::function<void(const LoopIteration&)>& on_iteration = {});

}  // namespace quadfree::cli

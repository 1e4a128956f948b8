#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quadfree::cli {

namespace {

constexpr double kEps = 1e-9;
constexpr int kMaxPivots = 100000;

struct Tableau {
  // rows × (cols + 1); last column is the right-hand side.
  std::vector<std::vector<double>> T;
  std::vector<int> basis;
  int cols = 0;

  void pivot(int r, int c) {
    const double piv = T[r][c];
    for (double& v : T[r]) v /= piv;
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      const double f = T[i][c];
      if (f == 0.0) continue;
      for (int k = 0; k <= cols; ++k) T[i][k] -= f * T[r][k];
    }
    basis[r] = c;
  }

  // Minimizes costᵀz over columns allowed[c]; returns false when unbounded.
  bool optimize(const std::vector<double>& cost, const std::vector<bool>& allowed, int& pivots) {
    const int m = static_cast<int>(T.size());
    for (;;) {
      if (++pivots > kMaxPivots) return true;
      int enter = -1;
      for (int c = 0; c < cols && enter < 0; ++c) {
        if (!allowed[c]) continue;
        if (std::find(basis.begin(), basis.end(), c) != basis.end()) continue;
        double rc = cost[c];
        for (int i = 0; i < m; ++i) rc -= cost[basis[i]] * T[i][c];
        if (rc < -kEps) enter = c;
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (T[i][enter] <= kEps) continue;
        const double ratio = T[i][cols] / T[i][enter];
        if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && leave >= 0 && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LPResult solve_lp(const std::vector<double>& c, const std::vector<LinearConstraint>& rows) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(rows.size());
  int n_slack = 0;
  for (const auto& r : rows)
    if (r.sense != Sense::Eq) ++n_slack;
  // Columns: x⁺ (n), x⁻ (n), slacks, artificials (m).
  const int art0 = 2 * n + n_slack;
  Tableau tab;
  tab.cols = art0 + m;
  tab.T.assign(m, std::vector<double>(tab.cols + 1, 0.0));
  tab.basis.assign(m, -1);
  int slack = 2 * n;
  for (int i = 0; i < m; ++i) {
    const auto& r = rows[i];
    const double sign = r.rhs < 0.0 ? -1.0 : 1.0;
    for (int k = 0; k < n; ++k) {
      tab.T[i][k] = sign * r.coef[k];
      tab.T[i][n + k] = -sign * r.coef[k];
    }
    if (r.sense != Sense::Eq) {
      tab.T[i][slack] = sign * (r.sense == Sense::Le ? 1.0 : -1.0);
      if (tab.T[i][slack] > 0.0) tab.basis[i] = slack;
      ++slack;
    }
    tab.T[i][art0 + i] = 1.0;
    tab.T[i][tab.cols] = sign * r.rhs;
    if (tab.basis[i] < 0) tab.basis[i] = art0 + i;
  }

  LPResult res;
  std::vector<bool> allowed(tab.cols, true);
  std::vector<double> cost1(tab.cols, 0.0);
  for (int i = 0; i < m; ++i) cost1[art0 + i] = 1.0;
  tab.optimize(cost1, allowed, res.pivots);
  double infeas = 0.0;
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] >= art0) infeas += tab.T[i][tab.cols];
  if (infeas > 1e-7) {
    res.status = LPResult::Status::Infeasible;
    return res;
  }
  // Drive zero-level artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < art0) continue;
    for (int k = 0; k < art0; ++k)
      if (std::abs(tab.T[i][k]) > kEps) {
        tab.pivot(i, k);
        break;
      }
  }
  for (int k = art0; k < tab.cols; ++k) allowed[k] = false;
  std::vector<double> cost2(tab.cols, 0.0);
  for (int k = 0; k < n; ++k) {
    cost2[k] = c[k];
    cost2[n + k] = -c[k];
  }
  if (!tab.optimize(cost2, allowed, res.pivots)) {
    res.status = LPResult::Status::Unbounded;
    return res;
  }
  std::vector<double> z(tab.cols, 0.0);
  for (int i = 0; i < m; ++i) z[tab.basis[i]] = tab.T[i][tab.cols];
  res.x.assign(n, 0.0);
  res.objective = 0.0;
  for (int k = 0; k < n; ++k) {
    res.x[k] = z[k] - z[n + k];
    res.objective += c[k] * res.x[k];
  }
  res.status = LPResult::Status::Optimal;
  return res;
}

std::vector<std::size_t> tight_rows(const std::vector<LinearConstraint>& rows, const std::vector<double>& x,
                                    double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double lhs = 0.0, scale = std::abs(rows[i].rhs);
    for (std::size_t k = 0; k < x.size(); ++k) {
      lhs += rows[i].coef[k] * x[k];
      scale += std::abs(rows[i].coef[k] * x[k]);
    }
    if (std::abs(lhs - rows[i].rhs) <= tol * (1.0 + scale)) out.push_back(i);
  }
  return out;
}

}  // namespace quadfree::cli

// Fractional set cover via the dual LP:
//
//   max sum_sigma y_sigma  s.t.  sum_{sigma ni i} y_sigma <= c_i,  y >= 0.
//
// Since c > 0 the slack basis is feasible, so no phase one is needed. The
// primal x_i is read off the reduced cost of slack i at optimality. The upper
// bound x_i <= 1 never binds: with c_i > 0 an optimal cover never exceeds it.

#include <algorithm>
#include <cmath>

#include "covgame/advertiser.hpp"

namespace covgame {

namespace {

constexpr double kPivotEps = 1e-11;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    double* prow = &a_[pr * cols_];
    for (std::size_t c = 0; c < cols_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &a_[r * cols_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
};

}  // namespace

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::iteration_cap: return "iteration-cap";
  }
  return "?";
}

LpSolution solve_lp_relaxation(const CoveringInstance& inst, std::size_t max_pivots) {
  const std::size_t n = inst.num_agents();
  const std::size_t m = inst.num_sets();
  LpSolution sol;
  sol.x.assign(n, 0.0);
  if (m == 0) return sol;

  // Columns: y_0..y_{m-1}, slack_0..slack_{n-1}, rhs. Last row is the objective.
  const std::size_t rhs = m + n;
  Tableau t(n + 1, m + n + 1);
  const std::size_t obj = n;
  for (SetId k = 0; k < m; ++k) {
    for (AgentId i : inst.set(k).members) t.at(i, k) = 1.0;
    t.at(obj, k) = -1.0;
  }
  std::vector<std::size_t> basis(n);
  for (AgentId i = 0; i < n; ++i) {
    t.at(i, m + i) = 1.0;
    t.at(i, rhs) = inst.cost(i);
    basis[i] = m + i;
  }

  for (;;) {
    // Bland: lowest-index improving column, then lowest basic index among ratio ties.
    std::size_t enter = rhs;
    for (std::size_t c = 0; c < rhs; ++c)
      if (t.at(obj, c) < -kPivotEps) {
        enter = c;
        break;
      }
    if (enter == rhs) break;

    std::size_t leave = n;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = t.at(r, rhs) / a;
      if (leave == n || ratio < best_ratio - kPivotEps ||
          (ratio <= best_ratio + kPivotEps && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == n) {
      // Dual unbounded: some set cannot be covered.
      sol.status = LpStatus::infeasible;
      return sol;
    }
    if (sol.pivots == max_pivots) {
      sol.status = LpStatus::iteration_cap;
      return sol;
    }
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++sol.pivots;
  }

  for (AgentId i = 0; i < n; ++i) {
    sol.x[i] = std::clamp(t.at(obj, m + i), 0.0, 1.0);
    sol.objective += inst.cost(i) * sol.x[i];
  }
  return sol;
}

}  // namespace covgame

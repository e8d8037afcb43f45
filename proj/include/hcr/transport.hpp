#pragma once

#include <vector>

#include "hcr/matrix.hpp"

namespace hcr {

// Balanced transportation problem: ship mass from m sources to n sinks at
// per-unit costs, minimising total cost.
struct TransportProblem {
  std::vector<double> supplies;  // length m, non-negative
  std::vector<double> demands;   // length n, non-negative
  Matrix cost;                   // m x n, finite

  int num_sources() const { return static_cast<int>(supplies.size()); }
  int num_sinks() const { return static_cast<int>(demands.size()); }

  // Shapes, finiteness, non-negativity, and balance:
  // |sum(supplies) - sum(demands)| <= 1e-12 * max(1, sum(supplies)).
  void validate() const;
};

struct BasicCell {
  int row = 0;
  int col = 0;

  friend bool operator==(const BasicCell&, const BasicCell&) = default;
};

struct TransportSolution {
  Matrix flow;                    // m x n, non-negative, meets all marginals
  double objective = 0.0;         // sum of cost * flow
  std::vector<double> row_duals;  // u, with u[0] = 0
  std::vector<double> col_duals;  // v
  std::vector<BasicCell> basics;  // m + n - 1 cells, a spanning tree
  int iterations = 0;             // simplex pivots performed
};

// North-west-corner starting flow: exactly m + n - 1 basic cells forming a
// spanning tree (degenerate steps contribute zero-flow basics).
struct InitialBasis {
  Matrix flow;
  std::vector<BasicCell> basics;
};
InitialBasis north_west_start(const TransportProblem& problem);

// Exact solve by the transportation simplex (u-v method) with Bland's
// anti-cycling rule: the entering cell is the first row-major cell with
// negative reduced cost; the leaving cell is the lexicographically smallest
// donor achieving the step.
TransportSolution solve(const TransportProblem& problem);

// d(objective)/d(cost[i][j]) at the optimum: the optimal flow itself.
Matrix gradient_wrt_cost(const TransportProblem& problem, const TransportSolution& solution);

// Optimality certificate from the duals: primal balance, dual feasibility
// (u_i + v_j <= c_ij), and complementary slackness (flow above 1e-12 only on
// cells with tight reduced cost).
struct CertificateReport {
  double max_balance_violation = 0.0;
  double max_dual_infeasibility = 0.0;
  double max_slackness_violation = 0.0;

  bool ok(double tolerance = 1e-9) const {
    return max_balance_violation <= tolerance && max_dual_infeasibility <= tolerance &&
           max_slackness_violation <= tolerance;
  }
};
CertificateReport check_certificate(const TransportProblem& problem,
                                    const TransportSolution& solution);

// True when the optimum is safely isolated: every basic flow exceeds
// flow_tolerance and every non-basic reduced cost exceeds
// reduced_cost_tolerance. Finite-difference gradient checks are only
// meaningful on such instances.
bool is_nondegenerate(const TransportProblem& problem, const TransportSolution& solution,
                      double flow_tolerance = 1e-4, double reduced_cost_tolerance = 1e-4);

// Central finite differences of the optimal objective against the analytic
// gradient. `degenerate` is set (and the error left at zero) when the
// instance is too degenerate for the comparison to be meaningful.
struct GradientCheck {
  double max_rel_error = 0.0;
  bool degenerate = false;
};
GradientCheck finite_difference_check(const TransportProblem& problem, double step = 1e-6);

}  // namespace hcr

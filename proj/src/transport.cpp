#include "hcr/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "hcr/error.hpp"

namespace hcr {
namespace {

// Reduced costs above -kPivotTolerance count as non-negative; keeps the pivot
// loop from chasing round-off.
constexpr double kPivotTolerance = 1e-11;

struct BasisAdjacency {
  // Bipartite tree over m row nodes and n column nodes; edges are the basic
  // cells.
  std::vector<std::vector<int>> rows_to_cols;
  std::vector<std::vector<int>> cols_to_rows;
};

BasisAdjacency build_adjacency(int m, int n, const std::vector<BasicCell>& basics) {
  BasisAdjacency adj;
  adj.rows_to_cols.resize(static_cast<std::size_t>(m));
  adj.cols_to_rows.resize(static_cast<std::size_t>(n));
  for (const BasicCell& cell : basics) {
    adj.rows_to_cols[static_cast<std::size_t>(cell.row)].push_back(cell.col);
    adj.cols_to_rows[static_cast<std::size_t>(cell.col)].push_back(cell.row);
  }
  return adj;
}

// Solves u_i + v_j = c_ij over the basis tree with u[0] = 0.
void compute_duals(const TransportProblem& p, const std::vector<BasicCell>& basics,
                   std::vector<double>& u, std::vector<double>& v) {
  const int m = p.num_sources();
  const int n = p.num_sinks();
  const BasisAdjacency adj = build_adjacency(m, n, basics);

  u.assign(static_cast<std::size_t>(m), 0.0);
  v.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<char> row_done(static_cast<std::size_t>(m), 0);
  std::vector<char> col_done(static_cast<std::size_t>(n), 0);

  std::queue<int> queue;  // rows are 0..m-1, columns are m..m+n-1
  row_done[0] = 1;
  queue.push(0);
  int visited = 1;
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop();
    if (node < m) {
      for (int j : adj.rows_to_cols[static_cast<std::size_t>(node)]) {
        if (col_done[static_cast<std::size_t>(j)]) continue;
        v[static_cast<std::size_t>(j)] = p.cost(node, j) - u[static_cast<std::size_t>(node)];
        col_done[static_cast<std::size_t>(j)] = 1;
        queue.push(m + j);
        ++visited;
      }
    } else {
      const int j = node - m;
      for (int i : adj.cols_to_rows[static_cast<std::size_t>(j)]) {
        if (row_done[static_cast<std::size_t>(i)]) continue;
        u[static_cast<std::size_t>(i)] = p.cost(i, j) - v[static_cast<std::size_t>(j)];
        row_done[static_cast<std::size_t>(i)] = 1;
        queue.push(i);
        ++visited;
      }
    }
  }
  if (visited != m + n) throw InvalidState("basis does not span all rows and columns");
}

// Unique tree path from row node `start_row` to column node `end_col`,
// returned as the basic cells along it (first cell leaves start_row).
std::vector<BasicCell> tree_path(int m, int n, const std::vector<BasicCell>& basics,
                                 int start_row, int end_col) {
  const BasisAdjacency adj = build_adjacency(m, n, basics);
  const int total = m + n;
  const int target = m + end_col;
  std::vector<int> parent(static_cast<std::size_t>(total), -1);
  std::vector<char> seen(static_cast<std::size_t>(total), 0);

  std::queue<int> queue;
  seen[static_cast<std::size_t>(start_row)] = 1;
  queue.push(start_row);
  while (!queue.empty() && !seen[static_cast<std::size_t>(target)]) {
    const int node = queue.front();
    queue.pop();
    if (node < m) {
      for (int j : adj.rows_to_cols[static_cast<std::size_t>(node)]) {
        if (seen[static_cast<std::size_t>(m + j)]) continue;
        seen[static_cast<std::size_t>(m + j)] = 1;
        parent[static_cast<std::size_t>(m + j)] = node;
        queue.push(m + j);
      }
    } else {
      const int j = node - m;
      for (int i : adj.cols_to_rows[static_cast<std::size_t>(j)]) {
        if (seen[static_cast<std::size_t>(i)]) continue;
        seen[static_cast<std::size_t>(i)] = 1;
        parent[static_cast<std::size_t>(i)] = m + j;
        queue.push(i);
      }
    }
  }
  if (!seen[static_cast<std::size_t>(target)]) {
    throw InvalidState("basis does not connect the entering cell's row and column");
  }

  std::vector<BasicCell> path;
  for (int node = target; node != start_row;) {
    const int prev = parent[static_cast<std::size_t>(node)];
    if (node < m) {
      path.push_back({node, prev - m});
    } else {
      path.push_back({prev, node - m});
    }
    node = prev;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool lex_less(const BasicCell& a, const BasicCell& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

}  // namespace

void TransportProblem::validate() const {
  const int m = num_sources();
  const int n = num_sinks();
  if (m < 1 || n < 1) throw InvalidArgument("transport problem needs sources and sinks");
  if (cost.rows() != m || cost.cols() != n) {
    throw InvalidArgument("cost matrix must be " + std::to_string(m) + "x" + std::to_string(n));
  }
  if (!cost.all_finite()) throw InvalidArgument("cost matrix must be finite");
  double supply_sum = 0.0;
  for (double s : supplies) {
    if (!std::isfinite(s) || s < 0.0) {
      throw InvalidArgument("supplies must be finite and non-negative");
    }
    supply_sum += s;
  }
  double demand_sum = 0.0;
  for (double d : demands) {
    if (!std::isfinite(d) || d < 0.0) {
      throw InvalidArgument("demands must be finite and non-negative");
    }
    demand_sum += d;
  }
  const double tolerance = 1e-12 * std::max(1.0, supply_sum);
  if (std::abs(supply_sum - demand_sum) > tolerance) {
    throw InvalidArgument("unbalanced transport problem: supplies sum to " +
                          std::to_string(supply_sum) + ", demands to " +
                          std::to_string(demand_sum));
  }
}

InitialBasis north_west_start(const TransportProblem& problem) {
  problem.validate();
  const int m = problem.num_sources();
  const int n = problem.num_sinks();

  InitialBasis basis;
  basis.flow = Matrix(m, n);
  basis.basics.reserve(static_cast<std::size_t>(m + n - 1));

  std::vector<double> remaining_supply = problem.supplies;
  std::vector<double> remaining_demand = problem.demands;

  // Walk from (0,0) to (m-1,n-1) advancing exactly one index per step, so the
  // walk places m + n - 1 basic cells even through degenerate ties.
  int i = 0;
  int j = 0;
  while (true) {
    const double amount = std::min(remaining_supply[static_cast<std::size_t>(i)],
                                   remaining_demand[static_cast<std::size_t>(j)]);
    basis.flow(i, j) = amount;
    basis.basics.push_back({i, j});
    remaining_supply[static_cast<std::size_t>(i)] -= amount;
    remaining_demand[static_cast<std::size_t>(j)] -= amount;
    if (i == m - 1 && j == n - 1) break;

    bool advance_col;
    if (i == m - 1) {
      advance_col = true;
    } else if (j == n - 1) {
      advance_col = false;
    } else {
      const bool row_done = remaining_supply[static_cast<std::size_t>(i)] <= 0.0;
      const bool col_done = remaining_demand[static_cast<std::size_t>(j)] <= 0.0;
      if (row_done && col_done) {
        advance_col = true;  // tie: keep a zero-flow basic in this row
      } else {
        advance_col = col_done;
      }
    }
    if (advance_col) {
      ++j;
    } else {
      ++i;
    }
  }
  return basis;
}

TransportSolution solve(const TransportProblem& problem) {
  problem.validate();
  const int m = problem.num_sources();
  const int n = problem.num_sinks();

  InitialBasis start = north_west_start(problem);
  Matrix flow = std::move(start.flow);
  std::vector<BasicCell> basics = std::move(start.basics);
  std::vector<char> is_basic(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), 0);
  for (const BasicCell& cell : basics) {
    is_basic[static_cast<std::size_t>(cell.row) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(cell.col)] = 1;
  }

  std::vector<double> u;
  std::vector<double> v;
  int pivots = 0;
  const int pivot_cap = 2000 * (m + n) + 10000;

  while (true) {
    compute_duals(problem, basics, u, v);

    // Entering cell: first row-major non-basic cell priced below zero.
    int enter_row = -1;
    int enter_col = -1;
    for (int i = 0; i < m && enter_row < 0; ++i) {
      for (int j = 0; j < n; ++j) {
        if (is_basic[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                     static_cast<std::size_t>(j)]) {
          continue;
        }
        const double reduced = problem.cost(i, j) - u[static_cast<std::size_t>(i)] -
                               v[static_cast<std::size_t>(j)];
        if (reduced < -kPivotTolerance) {
          enter_row = i;
          enter_col = j;
          break;
        }
      }
    }
    if (enter_row < 0) break;  // optimal

    if (++pivots > pivot_cap) {
      throw Error("transportation simplex exceeded its pivot budget");
    }

    // The entering cell closes a cycle with the tree path from its row to its
    // column; flows alternate -,+,... along that path, starting with a donor.
    const std::vector<BasicCell> path = tree_path(m, n, basics, enter_row, enter_col);

    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t pos = 0; pos < path.size(); pos += 2) {
      theta = std::min(theta, flow(path[pos].row, path[pos].col));
    }
    // Leaving cell: lexicographically smallest donor achieving theta.
    BasicCell leaving{-1, -1};
    for (std::size_t pos = 0; pos < path.size(); pos += 2) {
      const BasicCell& cell = path[pos];
      if (flow(cell.row, cell.col) == theta &&
          (leaving.row < 0 || lex_less(cell, leaving))) {
        leaving = cell;
      }
    }

    flow(enter_row, enter_col) += theta;
    for (std::size_t pos = 0; pos < path.size(); ++pos) {
      const BasicCell& cell = path[pos];
      if (pos % 2 == 0) {
        flow(cell.row, cell.col) -= theta;
      } else {
        flow(cell.row, cell.col) += theta;
      }
    }
    flow(leaving.row, leaving.col) = 0.0;

    is_basic[static_cast<std::size_t>(leaving.row) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(leaving.col)] = 0;
    is_basic[static_cast<std::size_t>(enter_row) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(enter_col)] = 1;
    for (BasicCell& cell : basics) {
      if (cell == leaving) {
        cell = {enter_row, enter_col};
        break;
      }
    }
  }

  TransportSolution solution;
  solution.objective = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) solution.objective += problem.cost(i, j) * flow(i, j);
  }
  solution.flow = std::move(flow);
  solution.row_duals = std::move(u);
  solution.col_duals = std::move(v);
  solution.basics = std::move(basics);
  solution.iterations = pivots;
  return solution;
}

Matrix gradient_wrt_cost(const TransportProblem& problem, const TransportSolution& solution) {
  if (solution.flow.rows() != problem.num_sources() ||
      solution.flow.cols() != problem.num_sinks()) {
    throw InvalidArgument("solution shape does not match the problem");
  }
  return solution.flow;
}

CertificateReport check_certificate(const TransportProblem& problem,
                                    const TransportSolution& solution) {
  const int m = problem.num_sources();
  const int n = problem.num_sinks();
  if (solution.flow.rows() != m || solution.flow.cols() != n ||
      static_cast<int>(solution.row_duals.size()) != m ||
      static_cast<int>(solution.col_duals.size()) != n) {
    throw InvalidArgument("solution shape does not match the problem");
  }

  CertificateReport report;
  for (int i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      row_sum += solution.flow(i, j);
      if (solution.flow(i, j) < 0.0) {
        report.max_balance_violation =
            std::max(report.max_balance_violation, -solution.flow(i, j));
      }
    }
    report.max_balance_violation = std::max(
        report.max_balance_violation, std::abs(row_sum - problem.supplies[static_cast<std::size_t>(i)]));
  }
  for (int j = 0; j < n; ++j) {
    double col_sum = 0.0;
    for (int i = 0; i < m; ++i) col_sum += solution.flow(i, j);
    report.max_balance_violation = std::max(
        report.max_balance_violation, std::abs(col_sum - problem.demands[static_cast<std::size_t>(j)]));
  }

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const double slack = problem.cost(i, j) - solution.row_duals[static_cast<std::size_t>(i)] -
                           solution.col_duals[static_cast<std::size_t>(j)];
      report.max_dual_infeasibility = std::max(report.max_dual_infeasibility, -slack);
      if (solution.flow(i, j) > 1e-12) {
        report.max_slackness_violation =
            std::max(report.max_slackness_violation, std::abs(slack));
      }
    }
  }
  return report;
}

bool is_nondegenerate(const TransportProblem& problem, const TransportSolution& solution,
                      double flow_tolerance, double reduced_cost_tolerance) {
  const int m = problem.num_sources();
  const int n = problem.num_sinks();
  if (static_cast<int>(solution.basics.size()) != m + n - 1) {
    throw InvalidArgument("solution does not carry a full basis");
  }
  std::vector<char> is_basic(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), 0);
  for (const BasicCell& cell : solution.basics) {
    if (solution.flow(cell.row, cell.col) <= flow_tolerance) return false;
    is_basic[static_cast<std::size_t>(cell.row) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(cell.col)] = 1;
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (is_basic[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(j)]) {
        continue;
      }
      const double reduced = problem.cost(i, j) - solution.row_duals[static_cast<std::size_t>(i)] -
                             solution.col_duals[static_cast<std::size_t>(j)];
      if (reduced <= reduced_cost_tolerance) return false;
    }
  }
  return true;
}

GradientCheck finite_difference_check(const TransportProblem& problem, double step) {
  if (step <= 0.0) throw InvalidArgument("finite difference step must be positive");
  const TransportSolution solution = solve(problem);
  if (!is_nondegenerate(problem, solution)) return {0.0, true};

  const Matrix gradient = gradient_wrt_cost(problem, solution);
  GradientCheck check;
  TransportProblem perturbed = problem;
  for (int i = 0; i < problem.num_sources(); ++i) {
    for (int j = 0; j < problem.num_sinks(); ++j) {
      // Evaluate at the representable points cost +/- step and divide by the
      // step actually realized, so a linear objective differentiates exactly.
      const double original = problem.cost(i, j);
      const double up_cost = original + step;
      const double down_cost = original - step;
      perturbed.cost(i, j) = up_cost;
      const double up = solve(perturbed).objective;
      perturbed.cost(i, j) = down_cost;
      const double down = solve(perturbed).objective;
      perturbed.cost(i, j) = original;

      const double estimate = (up - down) / (up_cost - down_cost);
      const double rel = std::abs(estimate - gradient(i, j)) /
                         std::max(1.0, std::abs(gradient(i, j)));
      check.max_rel_error = std::max(check.max_rel_error, rel);
    }
  }
  return check;
}

}  // namespace hcr

#include <cmath>
#include <limits>
#include <queue>

#include "flexplan/solver.h"

namespace flexplan {
namespace {

struct Node {
  double bound = 0.0;
  std::int64_t id = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> primal;
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Column whose value is farthest from an integer; -1 when all integer columns
// are integral within tolerance. Ties go to the lowest index.
int MostFractional(const LpProblem& p, const std::vector<double>& x,
                   double tol) {
  int best = -1;
  double best_dist = tol;
  for (int j = 0; j < p.num_cols(); ++j) {
    if (!p.integer[j]) continue;
    const double frac = x[j] - std::floor(x[j]);
    const double dist = std::min(frac, 1.0 - frac);
    if (dist > best_dist) {
      best_dist = dist;
      best = j;
    }
  }
  return best;
}

void SnapIntegers(const LpProblem& p, std::vector<double>& x) {
  for (int j = 0; j < p.num_cols(); ++j) {
    if (p.integer[j]) x[j] = std::round(x[j]);
  }
}

double Evaluate(const LpProblem& p, const std::vector<double>& x) {
  double z = p.objective_offset;
  for (int j = 0; j < p.num_cols(); ++j) z += p.objective[j] * x[j];
  return z;
}

}  // namespace

Solution SolveMilp(const LpProblem& problem, const SolverOptions& options) {
  problem.CheckDimensions();
  bool any_integer = false;
  for (bool b : problem.integer) any_integer = any_integer || b;
  if (!any_integer) {
    Solution s = SolveLp(problem, options);
    s.nodes = 1;
    return s;
  }

  LpProblem work = problem;
  Solution result;
  std::int64_t next_id = 0;

  Solution root = SolveLp(work, options);
  result.iterations = root.iterations;
  result.nodes = 1;
  if (root.status != SolveStatus::kOptimal) {
    result.status = root.status;
    return result;
  }

  double incumbent_obj = std::numeric_limits<double>::infinity();
  std::vector<double> incumbent;
  auto accept = [&](std::vector<double> x) {
    SnapIntegers(problem, x);
    const double z = Evaluate(problem, x);
    if (z < incumbent_obj) {
      incumbent_obj = z;
      incumbent = std::move(x);
    }
  };

  std::priority_queue<Node, std::vector<Node>, WorseNode> open;
  if (MostFractional(problem, root.primal, options.integrality_tol) < 0) {
    accept(root.primal);
  } else {
    open.push({root.objective, next_id++, problem.lower, problem.upper,
               std::move(root.primal)});
  }

  bool limit_hit = false;
  while (!open.empty() && !limit_hit) {
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent_obj - options.gap_tol) break;
    const int j = MostFractional(problem, node.primal, options.integrality_tol);
    const double value = node.primal[j];

    for (int side = 0; side < 2; ++side) {
      if (result.nodes >= options.max_nodes) {
        limit_hit = true;
        break;
      }
      std::vector<double> lower = node.lower;
      std::vector<double> upper = node.upper;
      if (side == 0) {
        upper[j] = std::floor(value);
      } else {
        lower[j] = std::ceil(value);
      }
      if (lower[j] > upper[j]) continue;
      work.lower = lower;
      work.upper = upper;
      Solution child = SolveLp(work, options);
      ++result.nodes;
      result.iterations += child.iterations;
      if (child.status == SolveStatus::kUnbounded) {
        result.status = SolveStatus::kUnbounded;
        return result;
      }
      if (child.status == SolveStatus::kIterationLimit) {
        limit_hit = true;
        break;
      }
      if (child.status != SolveStatus::kOptimal) continue;
      if (child.objective >= incumbent_obj - options.gap_tol) continue;
      if (MostFractional(problem, child.primal, options.integrality_tol) < 0) {
        accept(std::move(child.primal));
      } else {
        open.push({child.objective, next_id++, std::move(lower),
                   std::move(upper), std::move(child.primal)});
      }
    }
  }

  if (limit_hit) {
    result.status = SolveStatus::kIterationLimit;
  } else {
    result.status = incumbent.empty() ? SolveStatus::kInfeasible
                                      : SolveStatus::kOptimal;
  }
  if (!incumbent.empty()) {
    result.primal = std::move(incumbent);
    result.objective = incumbent_obj;
  }
  return result;
}

}  // namespace flexplan

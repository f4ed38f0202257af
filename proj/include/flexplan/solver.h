#ifndef FLEXPLAN_SOLVER_H_
#define FLEXPLAN_SOLVER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "flexplan/system.h"

namespace flexplan {

class ModelInstance;

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// min c'x + offset  s.t.  rows <sense> rhs,  lower <= x <= upper.
struct LpProblem {
  std::vector<double> objective;
  double objective_offset = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer;
  std::vector<Sense> senses;
  std::vector<double> rhs;
  std::vector<Triplet> entries;

  int num_cols() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  int AddColumn(double cost, double lower, double upper, bool integer = false);
  int AddRow(const std::vector<std::pair<int, double>>& coefs, Sense sense,
             double rhs);

  // Throws std::invalid_argument on inconsistent dimensions, indices out of
  // range or non-finite objective coefficients.
  void CheckDimensions() const;
};

// Columns follow the model's variable order, rows its constraint order.
LpProblem ToLpProblem(const ModelInstance& model);

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view ToString(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> primal;
  double objective = 0.0;
  // Row duals (LP only), sign convention y = c_B B^-1 so that reduced costs
  // are c - A'y.
  std::vector<double> duals;
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;
};

struct SolverOptions {
  std::int64_t max_iterations = 1'000'000;
  std::int64_t max_nodes = 100'000;
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  double gap_tol = 1e-6;
};

// Two-phase dense tableau simplex with Bland's rule. Integrality is ignored.
Solution SolveLp(const LpProblem& problem, const SolverOptions& options = {});

// Best-bound branch and bound on the most fractional integer column.
Solution SolveMilp(const LpProblem& problem, const SolverOptions& options = {});

struct VerificationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Row feasibility, bounds and integrality of `solution`, and for LP solutions
// carrying duals, agreement of primal and dual objectives.
VerificationReport Verify(const LpProblem& problem, const Solution& solution,
                          const SolverOptions& options = {});

}  // namespace flexplan

#endif  // FLEXPLAN_SOLVER_H_

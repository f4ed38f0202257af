#include <cmath>
#include <sstream>

#include "flexplan/solver.h"

namespace flexplan {

VerificationReport Verify(const LpProblem& problem, const Solution& solution,
                          const SolverOptions& options) {
  VerificationReport report;
  auto add = [&report](const std::string& what) {
    report.violations.push_back(what);
  };
  if (solution.status != SolveStatus::kOptimal) {
    add("solution status is " + std::string(ToString(solution.status)));
    return report;
  }
  const int n = problem.num_cols();
  const int m = problem.num_rows();
  if (static_cast<int>(solution.primal.size()) != n) {
    add("primal vector has wrong length");
    return report;
  }
  const std::vector<double>& x = solution.primal;
  const double tol = options.feasibility_tol;

  std::vector<double> activity(m, 0.0);
  for (const Triplet& t : problem.entries) activity[t.row] += t.value * x[t.col];
  for (int i = 0; i < m; ++i) {
    const double a = activity[i];
    const double b = problem.rhs[i];
    double violation = 0.0;
    switch (problem.senses[i]) {
      case Sense::kLessEqual: violation = a - b; break;
      case Sense::kGreaterEqual: violation = b - a; break;
      case Sense::kEqual: violation = std::fabs(a - b); break;
    }
    if (violation > tol) {
      std::ostringstream os;
      os << "row " << i << " violated by " << violation;
      add(os.str());
    }
  }
  for (int j = 0; j < n; ++j) {
    if (x[j] < problem.lower[j] - tol || x[j] > problem.upper[j] + tol) {
      std::ostringstream os;
      os << "column " << j << " value " << x[j] << " outside ["
         << problem.lower[j] << ", " << problem.upper[j] << "]";
      add(os.str());
    }
    if (problem.integer[j] &&
        std::fabs(x[j] - std::round(x[j])) > options.integrality_tol) {
      std::ostringstream os;
      os << "column " << j << " value " << x[j] << " not integral";
      add(os.str());
    }
  }

  double primal = problem.objective_offset;
  for (int j = 0; j < n; ++j) primal += problem.objective[j] * x[j];
  if (std::fabs(primal - solution.objective) > 1e-9 * (1.0 + std::fabs(primal))) {
    std::ostringstream os;
    os << "reported objective " << solution.objective << " differs from c'x "
       << primal;
    add(os.str());
  }

  if (static_cast<int>(solution.duals.size()) != m) return report;

  // Dual objective: b'y plus reduced costs priced at the bound they push on.
  const std::vector<double>& y = solution.duals;
  std::vector<double> reduced = problem.objective;
  for (const Triplet& t : problem.entries) reduced[t.col] -= t.value * y[t.row];
  double dual = problem.objective_offset;
  for (int i = 0; i < m; ++i) dual += problem.rhs[i] * y[i];
  for (int i = 0; i < m; ++i) {
    const bool wrong_sign =
        (problem.senses[i] == Sense::kGreaterEqual && y[i] < -1e-7) ||
        (problem.senses[i] == Sense::kLessEqual && y[i] > 1e-7);
    if (wrong_sign) {
      std::ostringstream os;
      os << "dual of row " << i << " has the wrong sign: " << y[i];
      add(os.str());
    }
  }
  for (int j = 0; j < n; ++j) {
    const double d = reduced[j];
    if (std::fabs(d) <= 1e-9) continue;
    const double bound = d > 0 ? problem.lower[j] : problem.upper[j];
    if (!std::isfinite(bound)) {
      std::ostringstream os;
      os << "reduced cost " << d << " of column " << j
         << " points at an infinite bound";
      add(os.str());
      continue;
    }
    dual += d * bound;
  }
  if (std::fabs(primal - dual) > options.gap_tol * (1.0 + std::fabs(primal))) {
    std::ostringstream os;
    os.precision(17);
    os << "primal objective " << primal << " and dual objective " << dual
       << " disagree";
    add(os.str());
  }
  return report;
}

}  // namespace flexplan

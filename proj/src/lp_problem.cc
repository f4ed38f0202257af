#include <cmath>
#include <stdexcept>

#include "flexplan/model.h"
#include "flexplan/solver.h"

namespace flexplan {

int LpProblem::AddColumn(double cost, double lo, double up, bool is_integer) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(up);
  integer.push_back(is_integer);
  return num_cols() - 1;
}

int LpProblem::AddRow(const std::vector<std::pair<int, double>>& coefs,
                      Sense sense, double row_rhs) {
  const int row = num_rows();
  for (const auto& [col, value] : coefs) entries.push_back({row, col, value});
  senses.push_back(sense);
  rhs.push_back(row_rhs);
  return row;
}

void LpProblem::CheckDimensions() const {
  const std::size_t n = objective.size();
  if (lower.size() != n || upper.size() != n || integer.size() != n) {
    throw std::invalid_argument("column arrays differ in length");
  }
  if (senses.size() != rhs.size()) {
    throw std::invalid_argument("row arrays differ in length");
  }
  for (double c : objective) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("non-finite objective coefficient");
    }
  }
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= num_rows() || t.col < 0 || t.col >= num_cols()) {
      throw std::invalid_argument("matrix entry out of range");
    }
    if (!std::isfinite(t.value)) {
      throw std::invalid_argument("non-finite matrix entry");
    }
  }
}

std::string_view ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

LpProblem ToLpProblem(const ModelInstance& model) {
  LpProblem lp;
  for (const Variable& v : model.variables()) {
    lp.AddColumn(0.0, v.lower, v.upper, v.integer);
  }
  for (const ObjectiveTerm& t : model.objective().terms) {
    lp.objective[*model.IndexOf(t.var)] += t.coef;
  }
  lp.objective_offset = model.objective().constant;
  for (const LinearConstraint& c : model.constraints()) {
    std::vector<std::pair<int, double>> coefs;
    coefs.reserve(c.terms.size());
    for (const Term& t : c.terms) {
      coefs.emplace_back(*model.IndexOf(t.var), t.coef.ToDouble());
    }
    lp.AddRow(coefs, c.sense, c.rhs.ToDouble());
  }
  return lp;
}

}  // namespace flexplan

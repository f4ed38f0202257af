#include <algorithm>
#include <cmath>
#include <limits>

#include "flexplan/solver.h"

namespace flexplan {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kZeroSnap = 1e-13;

// x_j = offset + sign * y[pos] - sign * y[neg]  (neg only for free columns)
struct ColumnMap {
  int pos = -1;
  int neg = -1;
  double offset = 0.0;
  double sign = 1.0;
};

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit };

// Dense tableau B^-1 [A | b] with the reduced-cost row kept alongside.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * (cols + 1)),
        basis_(rows, -1), reduced_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int i, int j) { return cells_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }
  double at(int i, int j) const { return cells_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }
  double& rhs(int i) { return at(i, cols_); }
  double rhs(int i) const { return at(i, cols_); }
  std::vector<int>& basis() { return basis_; }
  const std::vector<int>& basis() const { return basis_; }
  std::vector<double>& reduced() { return reduced_; }

  void PriceOut(const std::vector<double>& cost) {
    reduced_ = cost;
    for (int i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < cols_; ++j) reduced_[j] -= cb * at(i, j);
    }
  }

  void Pivot(int r, int q) {
    const double inv = 1.0 / at(r, q);
    for (int j = 0; j <= cols_; ++j) at(r, j) *= inv;
    at(r, q) = 1.0;
    for (int i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double factor = at(i, q);
      if (factor == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) {
        double& v = at(i, j);
        v -= factor * at(r, j);
        if (std::fabs(v) < kZeroSnap) v = 0.0;
      }
      at(i, q) = 0.0;
    }
    const double dq = reduced_[q];
    if (dq != 0.0) {
      for (int j = 0; j < cols_; ++j) {
        reduced_[j] -= dq * at(r, j);
        if (std::fabs(reduced_[j]) < kZeroSnap) reduced_[j] = 0.0;
      }
      reduced_[q] = 0.0;
    }
    basis_[r] = q;
  }

  // Bland's rule: lowest-index improving column, lowest basis index among
  // tied ratios.
  PhaseResult Run(const std::vector<bool>& may_enter, std::int64_t max_iter,
                  std::int64_t& iterations) {
    while (true) {
      int q = -1;
      for (int j = 0; j < cols_; ++j) {
        if (may_enter[j] && reduced_[j] < -kCostTol) {
          q = j;
          break;
        }
      }
      if (q < 0) return PhaseResult::kOptimal;
      int r = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double a = at(i, q);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(i) / a;
        if (r < 0 || ratio < best - 1e-12) {
          best = ratio;
          r = i;
        } else if (ratio <= best + 1e-12 && basis_[i] < basis_[r]) {
          r = i;
        }
      }
      if (r < 0) return PhaseResult::kUnbounded;
      if (iterations >= max_iter) return PhaseResult::kIterationLimit;
      Pivot(r, q);
      ++iterations;
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> cells_;
  std::vector<int> basis_;
  std::vector<double> reduced_;
};

double Objective(const LpProblem& p, const std::vector<double>& x) {
  double z = p.objective_offset;
  for (int j = 0; j < p.num_cols(); ++j) z += p.objective[j] * x[j];
  return z;
}

}  // namespace

Solution SolveLp(const LpProblem& problem, const SolverOptions& options) {
  problem.CheckDimensions();
  Solution result;
  const int n = problem.num_cols();
  const int m = problem.num_rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  for (int j = 0; j < n; ++j) {
    if (problem.lower[j] > problem.upper[j] + options.feasibility_tol ||
        problem.lower[j] == kInf || problem.upper[j] == -kInf) {
      result.status = SolveStatus::kInfeasible;
      return result;
    }
  }

  // Shift and split columns so every working column is nonnegative.
  std::vector<ColumnMap> maps(n);
  std::vector<double> struct_cost;
  std::vector<std::pair<int, double>> bound_rows;  // (working col, limit)
  for (int j = 0; j < n; ++j) {
    ColumnMap& cm = maps[j];
    const double lo = problem.lower[j];
    const double up = problem.upper[j];
    cm.pos = static_cast<int>(struct_cost.size());
    if (std::isfinite(lo)) {
      cm.offset = lo;
      cm.sign = 1.0;
      struct_cost.push_back(problem.objective[j]);
      if (std::isfinite(up)) bound_rows.emplace_back(cm.pos, up - lo);
    } else if (std::isfinite(up)) {
      cm.offset = up;
      cm.sign = -1.0;
      struct_cost.push_back(-problem.objective[j]);
    } else {
      struct_cost.push_back(problem.objective[j]);
      cm.neg = static_cast<int>(struct_cost.size());
      struct_cost.push_back(-problem.objective[j]);
    }
  }
  const int ns = static_cast<int>(struct_cost.size());
  const int total_rows = m + static_cast<int>(bound_rows.size());

  // Dense working rows.
  std::vector<std::vector<double>> rows(total_rows, std::vector<double>(ns));
  std::vector<double> b(total_rows);
  std::vector<Sense> sense(total_rows, Sense::kLessEqual);
  for (int i = 0; i < m; ++i) {
    b[i] = problem.rhs[i];
    sense[i] = problem.senses[i];
  }
  for (const Triplet& t : problem.entries) {
    const ColumnMap& cm = maps[t.col];
    rows[t.row][cm.pos] += t.value * cm.sign;
    if (cm.neg >= 0) rows[t.row][cm.neg] -= t.value * cm.sign;
    b[t.row] -= t.value * cm.offset;
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    rows[m + k][bound_rows[k].first] = 1.0;
    b[m + k] = bound_rows[k].second;
  }
  std::vector<bool> flipped(total_rows, false);
  for (int i = 0; i < total_rows; ++i) {
    if (b[i] < 0) {
      flipped[i] = true;
      b[i] = -b[i];
      for (double& v : rows[i]) v = -v;
      if (sense[i] == Sense::kLessEqual) {
        sense[i] = Sense::kGreaterEqual;
      } else if (sense[i] == Sense::kGreaterEqual) {
        sense[i] = Sense::kLessEqual;
      }
    }
  }

  int num_slack = 0;
  int num_art = 0;
  for (int i = 0; i < total_rows; ++i) {
    if (sense[i] != Sense::kEqual) ++num_slack;
    if (sense[i] != Sense::kLessEqual) ++num_art;
  }
  const int cols = ns + num_slack + num_art;
  Tableau tab(total_rows, cols);
  std::vector<int> initial_col(total_rows);
  std::vector<bool> is_artificial(cols, false);
  {
    int slack = ns;
    int art = ns + num_slack;
    for (int i = 0; i < total_rows; ++i) {
      for (int j = 0; j < ns; ++j) tab.at(i, j) = rows[i][j];
      tab.rhs(i) = b[i];
      if (sense[i] == Sense::kLessEqual) {
        tab.at(i, slack) = 1.0;
        initial_col[i] = slack++;
      } else {
        if (sense[i] == Sense::kGreaterEqual) tab.at(i, slack++) = -1.0;
        tab.at(i, art) = 1.0;
        is_artificial[art] = true;
        initial_col[i] = art++;
      }
      tab.basis()[i] = initial_col[i];
    }
  }
  rows.clear();

  std::int64_t iterations = 0;
  if (num_art > 0) {
    std::vector<double> phase1_cost(cols, 0.0);
    for (int j = 0; j < cols; ++j) {
      if (is_artificial[j]) phase1_cost[j] = 1.0;
    }
    tab.PriceOut(phase1_cost);
    const std::vector<bool> all(cols, true);
    const PhaseResult r = tab.Run(all, options.max_iterations, iterations);
    result.iterations = iterations;
    if (r == PhaseResult::kIterationLimit) {
      result.status = SolveStatus::kIterationLimit;
      return result;
    }
    double infeasibility = 0.0;
    double scale = 1.0;
    for (int i = 0; i < total_rows; ++i) {
      scale = std::max(scale, b[i]);
      if (is_artificial[tab.basis()[i]]) infeasibility += tab.rhs(i);
    }
    if (infeasibility > options.feasibility_tol * scale) {
      result.status = SolveStatus::kInfeasible;
      return result;
    }
    // Pivot remaining zero-level artificials out where the row allows it.
    for (int i = 0; i < total_rows; ++i) {
      if (!is_artificial[tab.basis()[i]]) continue;
      for (int j = 0; j < cols; ++j) {
        if (!is_artificial[j] && std::fabs(tab.at(i, j)) > kPivotTol) {
          tab.Pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<double> cost(cols, 0.0);
  std::copy(struct_cost.begin(), struct_cost.end(), cost.begin());
  tab.PriceOut(cost);
  std::vector<bool> may_enter(cols);
  for (int j = 0; j < cols; ++j) may_enter[j] = !is_artificial[j];
  const PhaseResult r = tab.Run(may_enter, options.max_iterations, iterations);
  result.iterations = iterations;
  if (r == PhaseResult::kIterationLimit) {
    result.status = SolveStatus::kIterationLimit;
    return result;
  }
  if (r == PhaseResult::kUnbounded) {
    result.status = SolveStatus::kUnbounded;
    return result;
  }

  std::vector<double> y(cols, 0.0);
  for (int i = 0; i < total_rows; ++i) y[tab.basis()[i]] = tab.rhs(i);
  result.primal.resize(n);
  for (int j = 0; j < n; ++j) {
    const ColumnMap& cm = maps[j];
    double v = y[cm.pos];
    if (cm.neg >= 0) v -= y[cm.neg];
    result.primal[j] = cm.offset + cm.sign * v;
  }
  result.duals.resize(m);
  for (int i = 0; i < m; ++i) {
    const double d = -tab.reduced()[initial_col[i]];
    result.duals[i] = flipped[i] ? -d : d;
  }
  result.objective = Objective(problem, result.primal);
  result.status = SolveStatus::kOptimal;
  return result;
}

}  // namespace flexplan

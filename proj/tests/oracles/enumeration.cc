#include <algorithm>
#include <cmath>
#include <limits>

#include "oracles.h"

namespace flexplan::testing {
namespace {

constexpr double kTol = 1e-9;

struct Hyperplane {
  std::vector<double> a;
  double b = 0.0;
};

// Gaussian elimination with partial pivoting; nullopt when singular.
std::optional<std::vector<double>> SolveSquare(std::vector<std::vector<double>> a,
                                               std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[pivot][c])) pivot = r;
    }
    if (std::fabs(a[pivot][c]) < 1e-10) return std::nullopt;
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

bool Feasible(const LpProblem& lp, const std::vector<std::vector<double>>& rows,
              const std::vector<double>& x) {
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (!std::isfinite(x[j])) return false;
    const double scale = 1.0 + std::fabs(x[j]);
    if (x[j] < lp.lower[j] - kTol * scale || x[j] > lp.upper[j] + kTol * scale) {
      return false;
    }
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    double activity = 0.0;
    double magnitude = std::fabs(lp.rhs[i]);
    for (int j = 0; j < lp.num_cols(); ++j) {
      activity += rows[i][j] * x[j];
      magnitude += std::fabs(rows[i][j] * x[j]);
    }
    const double tol = kTol * (1.0 + magnitude);
    switch (lp.senses[i]) {
      case Sense::kLessEqual:
        if (activity > lp.rhs[i] + tol) return false;
        break;
      case Sense::kGreaterEqual:
        if (activity < lp.rhs[i] - tol) return false;
        break;
      case Sense::kEqual:
        if (std::fabs(activity - lp.rhs[i]) > tol) return false;
        break;
    }
  }
  return true;
}

}  // namespace

OracleResult EnumerateVertices(const LpProblem& lp) {
  const int n = lp.num_cols();
  const int m = lp.num_rows();
  std::vector<std::vector<double>> rows(m, std::vector<double>(n, 0.0));
  for (const Triplet& t : lp.entries) rows[t.row][t.col] += t.value;

  OracleResult best;
  if (n == 0) {
    best.feasible = Feasible(lp, rows, {});
    best.objective = lp.objective_offset;
    return best;
  }
  std::vector<Hyperplane> planes;
  for (int i = 0; i < m; ++i) planes.push_back({rows[i], lp.rhs[i]});
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    if (std::isfinite(lp.lower[j])) planes.push_back({e, lp.lower[j]});
    if (std::isfinite(lp.upper[j]) && lp.upper[j] != lp.lower[j]) {
      planes.push_back({e, lp.upper[j]});
    }
  }
  const int total = static_cast<int>(planes.size());
  if (total < n) return best;

  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i : pick) {
      a.push_back(planes[i].a);
      b.push_back(planes[i].b);
    }
    if (auto x = SolveSquare(a, b)) {
      if (Feasible(lp, rows, *x)) {
        double value = lp.objective_offset;
        for (int j = 0; j < n; ++j) value += lp.objective[j] * (*x)[j];
        if (!best.feasible || value < best.objective) {
          best.feasible = true;
          best.objective = value;
          best.x = *x;
        }
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == total - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

OracleResult EnumerateIntegers(const LpProblem& lp) {
  const int n = lp.num_cols();
  std::vector<int> ints;
  std::vector<int> conts;
  for (int j = 0; j < n; ++j) (lp.integer[j] ? ints : conts).push_back(j);
  std::vector<int> pos(n, -1);
  for (std::size_t c = 0; c < conts.size(); ++c) pos[conts[c]] = static_cast<int>(c);

  std::vector<long> value(ints.size());
  for (std::size_t i = 0; i < ints.size(); ++i) {
    value[i] = static_cast<long>(std::ceil(lp.lower[ints[i]] - 1e-9));
  }
  OracleResult best;
  while (true) {
    bool empty_range = false;
    for (std::size_t i = 0; i < ints.size(); ++i) {
      if (value[i] > lp.upper[ints[i]] + 1e-9) empty_range = true;
    }
    if (empty_range) break;

    // Continuous subproblem with the integer columns fixed.
    LpProblem sub;
    sub.objective_offset = lp.objective_offset;
    std::vector<double> fixed(n, 0.0);
    for (std::size_t i = 0; i < ints.size(); ++i) {
      fixed[ints[i]] = static_cast<double>(value[i]);
      sub.objective_offset += lp.objective[ints[i]] * fixed[ints[i]];
    }
    for (int j : conts) sub.AddColumn(lp.objective[j], lp.lower[j], lp.upper[j]);
    sub.senses = lp.senses;
    sub.rhs = lp.rhs;
    for (const Triplet& t : lp.entries) {
      if (lp.integer[t.col]) {
        sub.rhs[t.row] -= t.value * fixed[t.col];
      } else {
        sub.entries.push_back({t.row, pos[t.col], t.value});
      }
    }
    const OracleResult r = EnumerateVertices(sub);
    if (r.feasible && (!best.feasible || r.objective < best.objective)) {
      best.feasible = true;
      best.objective = r.objective;
      best.x = fixed;
      for (std::size_t c = 0; c < conts.size(); ++c) best.x[conts[c]] = r.x[c];
    }

    std::size_t i = 0;
    while (i < ints.size()) {
      if (value[i] + 1 <= lp.upper[ints[i]] + 1e-9) {
        ++value[i];
        break;
      }
      value[i] = static_cast<long>(std::ceil(lp.lower[ints[i]] - 1e-9));
      ++i;
    }
    if (i == ints.size()) break;
  }
  return best;
}

LpProblem RandomLp(std::mt19937& rng, int max_cols, int max_rows) {
  std::uniform_int_distribution<int> cols(1, max_cols);
  std::uniform_int_distribution<int> rows(1, max_rows);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> cost(-5, 5);
  std::uniform_int_distribution<int> lo(-3, 0);
  std::uniform_int_distribution<int> width(1, 8);
  std::uniform_int_distribution<int> rhs(-5, 12);
  std::uniform_int_distribution<int> sense(0, 5);
  std::bernoulli_distribution zero(0.3);

  LpProblem lp;
  const int n = cols(rng);
  const int m = rows(rng);
  for (int j = 0; j < n; ++j) {
    const double l = zero(rng) ? 0.0 : lo(rng);
    lp.AddColumn(cost(rng), l, l + width(rng));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j) {
      if (zero(rng)) continue;
      const int c = coef(rng);
      if (c != 0) row.emplace_back(j, c);
    }
    const int s = sense(rng);
    const Sense sn = s < 3 ? Sense::kLessEqual
                     : s < 5 ? Sense::kGreaterEqual
                             : Sense::kEqual;
    lp.AddRow(row, sn, rhs(rng));
  }
  return lp;
}

LpProblem RandomBinaryToy(std::mt19937& rng, int max_binaries) {
  std::uniform_int_distribution<int> bins(1, max_binaries);
  std::uniform_int_distribution<int> conts(0, 2);
  std::uniform_int_distribution<int> rows(1, 6);
  std::uniform_int_distribution<int> coef(-3, 6);
  std::uniform_int_distribution<int> cost(-8, 8);
  std::uniform_int_distribution<int> rhs(-2, 12);
  std::uniform_int_distribution<int> sense(0, 4);

  LpProblem lp;
  const int b = bins(rng);
  const int c = conts(rng);
  for (int j = 0; j < b; ++j) lp.AddColumn(cost(rng), 0.0, 1.0, true);
  for (int j = 0; j < c; ++j) lp.AddColumn(cost(rng) / 2.0, 0.0, 5.0);
  const int m = rows(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < b + c; ++j) {
      const int v = coef(rng);
      if (v != 0) row.emplace_back(j, v);
    }
    const int s = sense(rng);
    const Sense sn = s < 3 ? Sense::kLessEqual
                     : s < 4 ? Sense::kGreaterEqual
                             : Sense::kEqual;
    lp.AddRow(row, sn, rhs(rng));
  }
  return lp;
}

}  // namespace flexplan::testing

#ifndef FLEXPLAN_TESTS_ORACLES_ORACLES_H_
#define FLEXPLAN_TESTS_ORACLES_ORACLES_H_

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flexplan/model.h"
#include "flexplan/rational.h"
#include "flexplan/solver.h"
#include "flexplan/system.h"
#include "flexplan/temporal.h"

namespace flexplan::testing {

std::filesystem::path DataDir(const std::string& name);

// Dense mapping built hour by hour: each hour adds 1/dur(tau) to the cell of
// the target and source blocks containing it.
std::vector<std::vector<Rational>> HourlyMapping(const BlockPartition& target,
                                                 const BlockPartition& source);

// Arbitrary cut points over [1, horizon].
BlockPartition RandomPartition(std::mt19937& rng, int horizon);

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
};

// Minimum over all basic points (n active constraints among rows and finite
// bounds). Exact for bounded feasible regions; with infinite bounds it is the
// best vertex, which is the optimum only when one exists.
OracleResult EnumerateVertices(const LpProblem& lp);

// Every integer assignment of the integer columns, each completed by
// EnumerateVertices over the continuous ones.
OracleResult EnumerateIntegers(const LpProblem& lp);

// Box-bounded LP with small integer data.
LpProblem RandomLp(std::mt19937& rng, int max_cols, int max_rows);
// Binary columns plus up to two bounded continuous columns.
LpProblem RandomBinaryToy(std::mt19937& rng, int max_binaries);

// Valid system in which every asset, flow and profile uses 1 h blocks.
EnergySystem RandomHourlySystem(std::mt19937& rng);

// Independent hour-by-hour construction of the model for systems whose
// resolutions are all 1 h.
ModelInstance NaiveHourlyModel(const EnergySystem& system);

// Empty string when both models agree term for term; otherwise the first
// difference found.
std::string CompareModels(const ModelInstance& expected,
                          const ModelInstance& actual);

}  // namespace flexplan::testing

#endif  // FLEXPLAN_TESTS_ORACLES_ORACLES_H_

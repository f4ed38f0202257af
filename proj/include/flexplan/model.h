#ifndef FLEXPLAN_MODEL_H_
#define FLEXPLAN_MODEL_H_

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flexplan/rational.h"
#include "flexplan/system.h"

namespace flexplan {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VariableKind {
  kFlow,
  kStorageLevel,
  kReserve,
  kUnitsOn,
  kUnitsInvested,
};

std::string_view ToString(VariableKind kind);
std::optional<VariableKind> ParseVariableKind(std::string_view text);

// Identity of one decision variable. `second` holds the flow destination for
// flows and the reserve product for reserves; `rep_period` and `block` are
// 1-based and zero for units_invested, which has neither.
struct VariableRef {
  VariableKind kind = VariableKind::kFlow;
  int year = 0;
  std::string asset;
  std::string second;
  int rep_period = 0;
  int block = 0;

  static VariableRef Flow(int year, std::string from, std::string to, int k,
                          int block);
  static VariableRef StorageLevel(int year, std::string asset, int k,
                                  int block);
  static VariableRef Reserve(int year, std::string asset, std::string reserve,
                             int k, int block);
  static VariableRef UnitsOn(int year, std::string asset, int k, int block);
  static VariableRef UnitsInvested(int year, std::string asset);

  auto operator<=>(const VariableRef&) const = default;
};

// `<kind>__<year>__<ids>__<k>__<block>` with sanitized ids.
std::string VariableName(const VariableRef& ref);
// Throws ModelError when `name` does not follow the naming scheme.
VariableRef ParseVariableName(std::string_view name);

struct Variable {
  VariableRef ref;
  double lower = 0.0;
  double upper = 0.0;
  bool integer = false;
  bool operator==(const Variable&) const = default;
};

// Row label: family plus the indices that make it unique. Absent indices are
// zero (rep_period/block) or empty (entity).
struct ConstraintName {
  std::string family;
  int year = 0;
  std::string entity;
  int rep_period = 0;
  int block = 0;

  auto operator<=>(const ConstraintName&) const = default;
};

std::string ToString(const ConstraintName& name);
ConstraintName ParseConstraintName(std::string_view text);

struct Term {
  VariableRef var;
  Rational coef;
  bool operator==(const Term&) const = default;
};

// sum(terms) <sense> rhs, with at most one term per variable.
struct LinearConstraint {
  ConstraintName name;
  std::vector<Term> terms;
  Sense sense = Sense::kEqual;
  Rational rhs;

  // Zero when the variable does not appear.
  Rational coef(const VariableRef& var) const;
  bool operator==(const LinearConstraint&) const = default;
};

struct ObjectiveTerm {
  VariableRef var;
  double coef = 0.0;
  bool operator==(const ObjectiveTerm&) const = default;
};

struct Objective {
  std::vector<ObjectiveTerm> terms;
  double constant = 0.0;
  bool operator==(const Objective&) const = default;
};

// Minimization model: registered variables in canonical order, constraints in
// assembly order, linear objective.
class ModelInstance {
 public:
  // Registers or tightens nothing if already present; returns the index.
  int AddVariable(const Variable& v);
  void AddConstraint(LinearConstraint c);
  void SetObjective(Objective objective) { objective_ = std::move(objective); }
  // Reorders variables canonically (kind, year, ids, period, block).
  void SortVariables();

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const {
    return constraints_;
  }
  const Objective& objective() const { return objective_; }

  std::optional<int> IndexOf(const VariableRef& ref) const;
  const Variable& variable(const VariableRef& ref) const;

  // Throws ModelError on unregistered references, duplicate constraint
  // names, or duplicate terms within a row.
  void CheckConsistency() const;

  bool operator==(const ModelInstance& other) const {
    return variables_ == other.variables_ &&
           constraints_ == other.constraints_ &&
           objective_ == other.objective_;
  }

 private:
  std::vector<Variable> variables_;
  std::map<VariableRef, int> index_;
  std::vector<LinearConstraint> constraints_;
  Objective objective_;
};

struct BuildOptions {
  // Overrides the per-asset storage boundary when set.
  std::optional<StorageBoundary> storage_boundary;
  // Treat every unit variable as continuous.
  bool relax_integrality = false;
  // Replace units_on of assets without investment by their initial units.
  bool substitute_fixed_units = true;
};

// Per-(year, rep period) partition helpers.
BlockPartition VariablePartition(const EnergySystem& system,
                                 const Asset& asset, int year, int k);
BlockPartition ProfilePartition(const EnergySystem& system,
                                const Asset& asset, int year, int k);
BlockPartition FlowPartition(const EnergySystem& system, const Flow& flow,
                             int year, int k);

// Whether max/min output rows exist for the asset.
bool HasOperationLimits(const EnergySystem& system, const Asset& asset);
// Whether units_on is a decision variable rather than a constant.
bool HasUnitsOnVariable(const EnergySystem& system, const Asset& asset,
                        const BuildOptions& options);

// Energy balance rows of one asset over its constraint partition. Empty for
// assets without the balance method.
std::vector<LinearConstraint> BuildBalance(const EnergySystem& system,
                                           const Asset& asset, int year, int k,
                                           const BuildOptions& options = {});

// Maximum and minimum output rows per block of the asset's own resolution.
std::vector<LinearConstraint> BuildCapacityLimits(
    const EnergySystem& system, const Asset& asset, int year, int k,
    const BuildOptions& options = {});

// Requirement rows per requirement block; blocks with zero requirement are
// skipped.
std::vector<LinearConstraint> BuildReserveRequirements(
    const EnergySystem& system, const ReserveProduct& reserve, int year,
    int k);

// Available-units rows for every period and block, plus the investment
// potential row for investable assets.
std::vector<LinearConstraint> BuildInvestment(const EnergySystem& system,
                                              const Asset& asset, int year,
                                              const BuildOptions& options = {});

// Milestone years whose labels fall in [year - lifetime + 1, year], clipped at
// the first milestone year.
std::vector<int> LifetimeWindow(const TemporalScope& scope, int year,
                                int lifetime_years);

Objective BuildObjective(const EnergySystem& system);

// Runs every builder and registers all variables with bounds and integrality.
// Throws ModelError when the system does not validate.
ModelInstance Assemble(const EnergySystem& system,
                       const BuildOptions& options = {});

}  // namespace flexplan

#endif  // FLEXPLAN_MODEL_H_

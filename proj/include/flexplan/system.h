#ifndef FLEXPLAN_SYSTEM_H_
#define FLEXPLAN_SYSTEM_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flexplan/temporal.h"

namespace flexplan {

enum class AssetKind { kConversion, kProduction, kConsumption, kTransport, kStorage };

enum class Sense { kEqual, kGreaterEqual, kLessEqual };

enum class StorageBoundary { kFixed, kCyclic };

std::string_view ToString(AssetKind kind);
std::string_view ToString(Sense sense);
std::string_view ToString(StorageBoundary boundary);
std::optional<AssetKind> ParseAssetKind(std::string_view text);
std::optional<Sense> ParseSense(std::string_view text);
std::optional<StorageBoundary> ParseStorageBoundary(std::string_view text);

// (milestone year, representative period)
using PeriodKey = std::pair<int, int>;
// Per-block values of one series, one vector per (year, rep period), stored at
// the resolution the series was declared with.
using PeriodSeries = std::map<PeriodKey, std::vector<double>>;
using YearValues = std::map<int, double>;

double ValueOr(const YearValues& values, int year, double fallback);

struct Asset {
  std::string id;
  AssetKind kind = AssetKind::kConversion;

  bool has_balance_method = false;
  // Unset means the kind default: >= for producers, = for everything else.
  std::optional<Sense> balance_sense;
  bool has_investment_method = false;

  // MW per unit. Zero means the asset has no operation limits.
  double capacity_per_unit = 0.0;
  YearValues potential_by_year;      // MW
  YearValues initial_units_by_year;  // units
  int lifetime_years = 1;

  int variable_resolution_hours = 1;
  // Resolution of profiles and of the production/demand/inflow series.
  int profile_resolution_hours = 1;

  PeriodSeries max_profile;  // p.u., missing periods default to 1
  PeriodSeries min_profile;  // p.u., missing periods default to 0
  PeriodSeries production_series;  // MWh per block
  PeriodSeries demand_series;      // MWh per block
  PeriodSeries inflow_series;      // MWh per block

  YearValues var_op_cost;    // EUR/MWh
  YearValues invest_cost;    // EUR/MW
  YearValues salvage_value;  // EUR/MW

  bool units_integer = true;

  StorageBoundary storage_boundary = StorageBoundary::kFixed;
  double storage_initial_level = 0.0;  // MWh, used with kFixed

  bool operator==(const Asset&) const = default;
};

Sense EffectiveBalanceSense(const Asset& asset);

struct Flow {
  std::string from;
  std::string to;
  double efficiency = 1.0;
  // Unset means the finer of the two endpoint variable resolutions.
  std::optional<int> resolution_hours;

  bool operator==(const Flow&) const = default;
};

struct ReserveProduct {
  std::string id;
  int requirement_resolution_hours = 1;
  PeriodSeries requirement;  // MW per requirement block
  std::set<std::string> upward_providers;
  std::set<std::string> downward_providers;

  std::set<std::string> providers() const;
  bool operator==(const ReserveProduct&) const = default;
};

struct EnergySystem {
  TemporalScope scope;
  std::map<std::string, Asset> assets;
  std::vector<Flow> flows;
  std::vector<ReserveProduct> reserves;

  // Throws std::out_of_range for an unknown id.
  const Asset& asset(std::string_view id) const;
  int FlowResolution(const Flow& flow) const;
  std::vector<const Flow*> IncomingFlows(std::string_view id) const;
  std::vector<const Flow*> OutgoingFlows(std::string_view id) const;

  bool operator==(const EnergySystem&) const = default;
};

struct Diagnostic {
  std::string rule;
  std::string subject;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

std::string ToString(const Diagnostic& d);

// One diagnostic per broken rule; empty when the system is well formed.
std::vector<Diagnostic> Validate(const EnergySystem& system);

std::set<std::string> NeighborsIn(const EnergySystem& system,
                                  std::string_view asset_id);
std::set<std::string> NeighborsOut(const EnergySystem& system,
                                   std::string_view asset_id);

// Identifier restricted to [A-Za-z0-9_] without doubled or edge underscores,
// so that "__" can separate fields of generated names.
std::string SanitizeId(std::string_view id);

}  // namespace flexplan

#endif  // FLEXPLAN_SYSTEM_H_

#include <algorithm>
#include <cmath>
#include <limits>

#include "flexplan/model.h"

namespace flexplan {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Rational Exact(double value) { return Rational::FromDouble(value); }

// Merges coefficients per variable; zero sums are dropped on Take().
class TermAccumulator {
 public:
  void Add(const VariableRef& var, const Rational& coef) {
    if (coef.IsZero()) return;
    terms_[var] += coef;
  }
  std::vector<Term> Take() {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& [var, coef] : terms_) {
      if (!coef.IsZero()) out.push_back({var, coef});
    }
    terms_.clear();
    return out;
  }

 private:
  std::map<VariableRef, Rational> terms_;
};

int Horizon(const EnergySystem& system, int year, int k) {
  return system.scope.Period(year, k).hours;
}

std::string PeriodText(int year, int k) {
  return "year " + std::to_string(year) + " period " + std::to_string(k);
}

const std::vector<double>& SeriesValues(const PeriodSeries& series,
                                        const BlockPartition& partition,
                                        int year, int k,
                                        std::string_view what,
                                        const std::string& owner) {
  auto it = series.find({year, k});
  if (it == series.end()) {
    throw ModelError("missing " + std::string(what) + " series for '" +
                     owner + "' in " + PeriodText(year, k));
  }
  if (static_cast<int>(it->second.size()) != partition.size()) {
    throw ModelError(std::string(what) + " series of '" + owner + "' in " +
                     PeriodText(year, k) + " does not match its partition");
  }
  return it->second;
}

// Per-block profile values, defaulting to `fallback` for periods without
// data.
std::vector<double> ProfileValues(const PeriodSeries& series,
                                  const BlockPartition& partition, int year,
                                  int k, double fallback, std::string_view what,
                                  const std::string& owner) {
  if (!series.contains({year, k})) {
    return std::vector<double>(partition.size(), fallback);
  }
  return SeriesValues(series, partition, year, k, what, owner);
}

std::vector<int> UnitsInvestedBounds(const EnergySystem& system,
                                     const Asset& asset) {
  std::vector<int> bounds;
  for (const MilestoneYear& y : system.scope.years) {
    const double potential = ValueOr(asset.potential_by_year, y.year, 0.0);
    bounds.push_back(
        static_cast<int>(std::floor(potential / asset.capacity_per_unit + 1e-9)));
  }
  return bounds;
}

}  // namespace

BlockPartition VariablePartition(const EnergySystem& system,
                                 const Asset& asset, int year, int k) {
  return UniformPartition(asset.variable_resolution_hours,
                          Horizon(system, year, k));
}

BlockPartition ProfilePartition(const EnergySystem& system,
                                const Asset& asset, int year, int k) {
  return UniformPartition(asset.profile_resolution_hours,
                          Horizon(system, year, k));
}

BlockPartition FlowPartition(const EnergySystem& system, const Flow& flow,
                             int year, int k) {
  return UniformPartition(system.FlowResolution(flow),
                          Horizon(system, year, k));
}

bool HasOperationLimits(const EnergySystem& system, const Asset& asset) {
  return asset.kind != AssetKind::kConsumption &&
         asset.capacity_per_unit > 0 &&
         !system.OutgoingFlows(asset.id).empty();
}

bool HasUnitsOnVariable(const EnergySystem& system, const Asset& asset,
                        const BuildOptions& options) {
  return HasOperationLimits(system, asset) &&
         (asset.has_investment_method || !options.substitute_fixed_units);
}

std::vector<LinearConstraint> BuildBalance(const EnergySystem& system,
                                           const Asset& asset, int year, int k,
                                           const BuildOptions& options) {
  if (!asset.has_balance_method) return {};

  const std::vector<const Flow*> incoming = system.IncomingFlows(asset.id);
  const std::vector<const Flow*> outgoing = system.OutgoingFlows(asset.id);
  std::vector<BlockPartition> incident;
  for (const Flow* f : incoming) {
    incident.push_back(FlowPartition(system, *f, year, k));
  }
  for (const Flow* f : outgoing) {
    incident.push_back(FlowPartition(system, *f, year, k));
  }

  // Constant series term and the sign it takes on the right-hand side.
  const PeriodSeries* series = nullptr;
  std::string_view series_name;
  int rhs_sign = 0;
  switch (asset.kind) {
    case AssetKind::kProduction:
      series = &asset.production_series;
      series_name = "production";
      rhs_sign = -1;
      break;
    case AssetKind::kConsumption:
      series = &asset.demand_series;
      series_name = "demand";
      rhs_sign = +1;
      break;
    case AssetKind::kStorage:
      if (asset.inflow_series.contains({year, k})) {
        series = &asset.inflow_series;
        series_name = "inflow";
        rhs_sign = -1;
      }
      break;
    default:
      break;
  }
  const bool storage = asset.kind == AssetKind::kStorage;
  if (storage) incident.push_back(VariablePartition(system, asset, year, k));
  if (series != nullptr) {
    incident.push_back(ProfilePartition(system, asset, year, k));
  }
  if (incident.empty()) return {};

  const BlockPartition rows = ConstraintPartition(incident);
  std::vector<TermAccumulator> lhs(rows.size());
  std::vector<Rational> rhs(rows.size());

  for (const Flow* f : incoming) {
    const MappingMatrix m =
        BuildMappingMatrix(rows, FlowPartition(system, *f, year, k));
    for (int p = 0; p < m.rows(); ++p) {
      for (const MappingMatrix::Entry& e : m.row(p)) {
        lhs[p].Add(VariableRef::Flow(year, f->from, f->to, k, e.col + 1),
                   e.value);
      }
    }
  }
  for (const Flow* f : outgoing) {
    const Rational efficiency = Exact(f->efficiency);
    const MappingMatrix m =
        BuildMappingMatrix(rows, FlowPartition(system, *f, year, k));
    for (int p = 0; p < m.rows(); ++p) {
      for (const MappingMatrix::Entry& e : m.row(p)) {
        lhs[p].Add(VariableRef::Flow(year, f->from, f->to, k, e.col + 1),
                   -(e.value / efficiency));
      }
    }
  }
  if (series != nullptr) {
    const BlockPartition data = ProfilePartition(system, asset, year, k);
    const std::vector<double>& values =
        SeriesValues(*series, data, year, k, series_name, asset.id);
    const MappingMatrix m = BuildMappingMatrix(rows, data);
    for (int p = 0; p < m.rows(); ++p) {
      for (const MappingMatrix::Entry& e : m.row(p)) {
        rhs[p] += Rational(rhs_sign) * e.value * Exact(values[e.col]);
      }
    }
  }
  if (storage) {
    const BlockPartition levels = VariablePartition(system, asset, year, k);
    const StorageBoundary boundary =
        options.storage_boundary.value_or(asset.storage_boundary);
    const MappingMatrix m = BuildMappingMatrix(rows, levels);
    for (int p = 0; p < m.rows(); ++p) {
      for (const MappingMatrix::Entry& e : m.row(p)) {
        // Level drawn down: s_{tau-1} - s_tau.
        lhs[p].Add(VariableRef::StorageLevel(year, asset.id, k, e.col + 1),
                   -e.value);
        if (e.col > 0) {
          lhs[p].Add(VariableRef::StorageLevel(year, asset.id, k, e.col),
                     e.value);
        } else if (boundary == StorageBoundary::kCyclic) {
          lhs[p].Add(
              VariableRef::StorageLevel(year, asset.id, k, levels.size()),
              e.value);
        } else {
          rhs[p] -= e.value * Exact(asset.storage_initial_level);
        }
      }
    }
  }

  const Sense sense = EffectiveBalanceSense(asset);
  std::vector<LinearConstraint> out;
  out.reserve(rows.size());
  for (int p = 0; p < rows.size(); ++p) {
    out.push_back({{"balance", year, asset.id, k, p + 1},
                   lhs[p].Take(),
                   sense,
                   rhs[p]});
  }
  return out;
}

std::vector<LinearConstraint> BuildCapacityLimits(const EnergySystem& system,
                                                  const Asset& asset, int year,
                                                  int k,
                                                  const BuildOptions& options) {
  if (!HasOperationLimits(system, asset)) return {};

  const BlockPartition blocks = VariablePartition(system, asset, year, k);
  const BlockPartition profile = ProfilePartition(system, asset, year, k);
  const std::vector<double> max_values = ProfileValues(
      asset.max_profile, profile, year, k, 1.0, "max profile", asset.id);
  const std::vector<double> min_values = ProfileValues(
      asset.min_profile, profile, year, k, 0.0, "min profile", asset.id);

  // Available energy per block in MWh per MW: sum over overlapping profile
  // blocks of overlap hours times the profile value.
  const MappingMatrix to_blocks = BuildMappingMatrix(blocks, profile);
  std::vector<Rational> max_factor(blocks.size());
  std::vector<Rational> min_factor(blocks.size());
  for (int t = 0; t < blocks.size(); ++t) {
    for (const MappingMatrix::Entry& e : to_blocks.row(t)) {
      const Rational hours = e.value * Rational(profile.block(e.col).duration());
      max_factor[t] += hours * Exact(max_values[e.col]);
      min_factor[t] += hours * Exact(min_values[e.col]);
    }
  }

  std::vector<std::string> up;
  std::vector<std::string> down;
  for (const ReserveProduct& r : system.reserves) {
    if (r.upward_providers.contains(asset.id)) up.push_back(r.id);
    if (r.downward_providers.contains(asset.id)) down.push_back(r.id);
  }

  const std::vector<const Flow*> outgoing = system.OutgoingFlows(asset.id);
  std::vector<MappingMatrix> flow_maps;
  flow_maps.reserve(outgoing.size());
  for (const Flow* f : outgoing) {
    flow_maps.push_back(
        BuildMappingMatrix(blocks, FlowPartition(system, *f, year, k)));
  }

  const bool units_variable = HasUnitsOnVariable(system, asset, options);
  const Rational capacity = Exact(asset.capacity_per_unit);
  const Rational initial_units =
      Exact(ValueOr(asset.initial_units_by_year, year, 0.0));
  const bool free_flows = asset.kind == AssetKind::kTransport;

  std::vector<LinearConstraint> out;
  for (int t = 0; t < blocks.size(); ++t) {
    TermAccumulator flows;
    for (std::size_t i = 0; i < outgoing.size(); ++i) {
      for (const MappingMatrix::Entry& e : flow_maps[i].row(t)) {
        flows.Add(VariableRef::Flow(year, outgoing[i]->from, outgoing[i]->to,
                                    k, e.col + 1),
                  e.value);
      }
    }
    const std::vector<Term> flow_terms = flows.Take();
    const VariableRef units = VariableRef::UnitsOn(year, asset.id, k, t + 1);

    TermAccumulator upper;
    for (const Term& term : flow_terms) upper.Add(term.var, term.coef);
    for (const std::string& r : up) {
      upper.Add(VariableRef::Reserve(year, asset.id, r, k, t + 1), 1);
    }
    Rational upper_rhs;
    if (units_variable) {
      upper.Add(units, -(capacity * max_factor[t]));
    } else {
      upper_rhs = capacity * initial_units * max_factor[t];
    }
    out.push_back({{"max_output", year, asset.id, k, t + 1},
                   upper.Take(),
                   Sense::kLessEqual,
                   upper_rhs});

    if (min_factor[t].IsZero() && down.empty() && !free_flows) continue;
    TermAccumulator lower;
    for (const Term& term : flow_terms) lower.Add(term.var, term.coef);
    for (const std::string& r : down) {
      lower.Add(VariableRef::Reserve(year, asset.id, r, k, t + 1), -1);
    }
    Rational lower_rhs;
    if (units_variable) {
      lower.Add(units, -(capacity * min_factor[t]));
    } else {
      lower_rhs = capacity * initial_units * min_factor[t];
    }
    out.push_back({{"min_output", year, asset.id, k, t + 1},
                   lower.Take(),
                   Sense::kGreaterEqual,
                   lower_rhs});
  }
  return out;
}

std::vector<LinearConstraint> BuildReserveRequirements(
    const EnergySystem& system, const ReserveProduct& reserve, int year,
    int k) {
  auto it = reserve.requirement.find({year, k});
  if (it == reserve.requirement.end()) return {};
  const BlockPartition blocks = UniformPartition(
      reserve.requirement_resolution_hours, Horizon(system, year, k));
  if (static_cast<int>(it->second.size()) != blocks.size()) {
    throw ModelError("requirement of reserve '" + reserve.id + "' in " +
                     PeriodText(year, k) +
                     " is inconsistent with the horizon");
  }

  std::vector<std::pair<std::string, MappingMatrix>> providers;
  for (const std::string& a : reserve.providers()) {
    providers.emplace_back(
        a, BuildMappingMatrix(
               blocks, VariablePartition(system, system.asset(a), year, k)));
  }

  std::vector<LinearConstraint> out;
  for (int p = 0; p < blocks.size(); ++p) {
    const Rational requirement = Exact(it->second[p]);
    if (requirement.IsZero()) continue;
    TermAccumulator lhs;
    for (const auto& [asset_id, m] : providers) {
      for (const MappingMatrix::Entry& e : m.row(p)) {
        lhs.Add(VariableRef::Reserve(year, asset_id, reserve.id, k, e.col + 1),
                e.value);
      }
    }
    out.push_back({{"reserve_requirement", year, reserve.id, k, p + 1},
                   lhs.Take(),
                   Sense::kGreaterEqual,
                   requirement * Rational(blocks.block(p).duration())});
  }
  return out;
}

std::vector<int> LifetimeWindow(const TemporalScope& scope, int year,
                                int lifetime_years) {
  if (scope.years.empty()) return {};
  const int first = std::max(year - lifetime_years + 1, scope.years.front().year);
  std::vector<int> window;
  for (const MilestoneYear& y : scope.years) {
    if (y.year >= first && y.year <= year) window.push_back(y.year);
  }
  return window;
}

std::vector<LinearConstraint> BuildInvestment(const EnergySystem& system,
                                              const Asset& asset, int year,
                                              const BuildOptions& options) {
  std::vector<LinearConstraint> out;
  const Rational initial_units =
      Exact(ValueOr(asset.initial_units_by_year, year, 0.0));
  const std::vector<int> window =
      asset.has_investment_method
          ? LifetimeWindow(system.scope, year, asset.lifetime_years)
          : std::vector<int>{};

  if (HasUnitsOnVariable(system, asset, options)) {
    const int periods =
        static_cast<int>(system.scope.Year(year).rep_periods.size());
    for (int k = 1; k <= periods; ++k) {
      const BlockPartition blocks = VariablePartition(system, asset, year, k);
      for (int t = 1; t <= blocks.size(); ++t) {
        TermAccumulator lhs;
        lhs.Add(VariableRef::UnitsOn(year, asset.id, k, t), 1);
        for (int psi : window) {
          lhs.Add(VariableRef::UnitsInvested(psi, asset.id), -1);
        }
        out.push_back({{"units_available", year, asset.id, k, t},
                       lhs.Take(),
                       Sense::kLessEqual,
                       initial_units});
      }
    }
  }

  if (asset.has_investment_method) {
    const Rational capacity = Exact(asset.capacity_per_unit);
    TermAccumulator lhs;
    for (int psi : window) {
      lhs.Add(VariableRef::UnitsInvested(psi, asset.id), capacity);
    }
    out.push_back({{"investment_potential", year, asset.id, 0, 0},
                   lhs.Take(),
                   Sense::kLessEqual,
                   Exact(ValueOr(asset.potential_by_year, year, 0.0))});
  }
  return out;
}

Objective BuildObjective(const EnergySystem& system) {
  Objective objective;
  for (const MilestoneYear& y : system.scope.years) {
    const double discount = DiscountFactor(system.scope, y.year);
    for (const auto& [id, asset] : system.assets) {
      if (!asset.has_investment_method) continue;
      const double coef = discount *
                          (ValueOr(asset.invest_cost, y.year, 0.0) -
                           ValueOr(asset.salvage_value, y.year, 0.0)) *
                          asset.capacity_per_unit;
      if (coef != 0.0) {
        objective.terms.push_back({VariableRef::UnitsInvested(y.year, id), coef});
      }
    }
    for (int k = 1; k <= static_cast<int>(y.rep_periods.size()); ++k) {
      const double weight = discount * y.weight * y.rep_periods[k - 1].weight;
      for (const Flow& f : system.flows) {
        const double coef =
            weight * ValueOr(system.asset(f.from).var_op_cost, y.year, 0.0);
        if (coef == 0.0) continue;
        const BlockPartition blocks = FlowPartition(system, f, y.year, k);
        for (int t = 1; t <= blocks.size(); ++t) {
          objective.terms.push_back(
              {VariableRef::Flow(y.year, f.from, f.to, k, t), coef});
        }
      }
    }
  }
  return objective;
}

ModelInstance Assemble(const EnergySystem& system,
                       const BuildOptions& options) {
  const std::vector<Diagnostic> diagnostics = Validate(system);
  if (!diagnostics.empty()) {
    std::string message = "system does not validate:";
    for (const Diagnostic& d : diagnostics) message += "\n  " + ToString(d);
    throw ModelError(message);
  }

  ModelInstance model;
  const TemporalScope& scope = system.scope;

  std::map<std::string, std::vector<int>> invest_bounds;
  for (const auto& [id, asset] : system.assets) {
    if (asset.has_investment_method) {
      invest_bounds[id] = UnitsInvestedBounds(system, asset);
    }
  }

  for (std::size_t yi = 0; yi < scope.years.size(); ++yi) {
    const MilestoneYear& y = scope.years[yi];
    for (int k = 1; k <= static_cast<int>(y.rep_periods.size()); ++k) {
      for (const Flow& f : system.flows) {
        const Asset& from = system.asset(f.from);
        const double lower = from.kind == AssetKind::kTransport &&
                                     HasOperationLimits(system, from)
                                 ? -kInf
                                 : 0.0;
        const BlockPartition blocks = FlowPartition(system, f, y.year, k);
        for (int t = 1; t <= blocks.size(); ++t) {
          model.AddVariable(
              {VariableRef::Flow(y.year, f.from, f.to, k, t), lower, kInf});
        }
      }
      for (const auto& [id, asset] : system.assets) {
        const BlockPartition blocks = VariablePartition(system, asset, y.year, k);
        if (asset.kind == AssetKind::kStorage) {
          for (int t = 1; t <= blocks.size(); ++t) {
            model.AddVariable(
                {VariableRef::StorageLevel(y.year, id, k, t), 0.0, kInf});
          }
        }
        if (HasUnitsOnVariable(system, asset, options)) {
          double upper = ValueOr(asset.initial_units_by_year, y.year, 0.0);
          if (asset.has_investment_method) {
            const std::vector<int>& bounds = invest_bounds.at(id);
            for (int psi : LifetimeWindow(scope, y.year, asset.lifetime_years)) {
              for (std::size_t j = 0; j < scope.years.size(); ++j) {
                if (scope.years[j].year == psi) upper += bounds[j];
              }
            }
          }
          const bool integer = asset.units_integer && !options.relax_integrality;
          for (int t = 1; t <= blocks.size(); ++t) {
            model.AddVariable(
                {VariableRef::UnitsOn(y.year, id, k, t), 0.0, upper, integer});
          }
        }
      }
      for (const ReserveProduct& r : system.reserves) {
        for (const std::string& a : r.providers()) {
          const BlockPartition blocks =
              VariablePartition(system, system.asset(a), y.year, k);
          for (int t = 1; t <= blocks.size(); ++t) {
            model.AddVariable(
                {VariableRef::Reserve(y.year, a, r.id, k, t), 0.0, kInf});
          }
        }
      }
    }
    for (const auto& [id, asset] : system.assets) {
      if (!asset.has_investment_method) continue;
      const bool integer = asset.units_integer && !options.relax_integrality;
      model.AddVariable({VariableRef::UnitsInvested(y.year, id), 0.0,
                         static_cast<double>(invest_bounds.at(id)[yi]),
                         integer});
    }
  }

  auto add_rows = [&model](std::vector<LinearConstraint> rows) {
    for (LinearConstraint& c : rows) {
      if (c.terms.empty()) {
        const int cmp = c.rhs.IsZero() ? 0 : (c.rhs.IsPositive() ? 1 : -1);
        // 0 <sense> rhs
        const bool satisfied = (c.sense == Sense::kEqual && cmp == 0) ||
                               (c.sense == Sense::kLessEqual && cmp >= 0) ||
                               (c.sense == Sense::kGreaterEqual && cmp <= 0);
        if (!satisfied) {
          throw ModelError("constant row " + ToString(c.name) +
                           " can never hold");
        }
        continue;
      }
      model.AddConstraint(std::move(c));
    }
  };

  for (const MilestoneYear& y : scope.years) {
    for (const auto& [id, asset] : system.assets) {
      for (int k = 1; k <= static_cast<int>(y.rep_periods.size()); ++k) {
        add_rows(BuildBalance(system, asset, y.year, k, options));
        add_rows(BuildCapacityLimits(system, asset, y.year, k, options));
      }
      add_rows(BuildInvestment(system, asset, y.year, options));
    }
    for (const ReserveProduct& r : system.reserves) {
      for (int k = 1; k <= static_cast<int>(y.rep_periods.size()); ++k) {
        add_rows(BuildReserveRequirements(system, r, y.year, k));
      }
    }
  }

  model.SetObjective(BuildObjective(system));
  model.SortVariables();
  model.CheckConsistency();
  return model;
}

}  // namespace flexplan

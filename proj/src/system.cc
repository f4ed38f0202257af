#include "flexplan/system.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace flexplan {

std::string_view ToString(AssetKind kind) {
  switch (kind) {
    case AssetKind::kConversion: return "conversion";
    case AssetKind::kProduction: return "production";
    case AssetKind::kConsumption: return "consumption";
    case AssetKind::kTransport: return "transport";
    case AssetKind::kStorage: return "storage";
  }
  return "unknown";
}

std::string_view ToString(Sense sense) {
  switch (sense) {
    case Sense::kEqual: return "eq";
    case Sense::kGreaterEqual: return "geq";
    case Sense::kLessEqual: return "leq";
  }
  return "unknown";
}

std::string_view ToString(StorageBoundary boundary) {
  return boundary == StorageBoundary::kCyclic ? "cyclic" : "fixed";
}

std::optional<AssetKind> ParseAssetKind(std::string_view text) {
  for (AssetKind k : {AssetKind::kConversion, AssetKind::kProduction,
                      AssetKind::kConsumption, AssetKind::kTransport,
                      AssetKind::kStorage}) {
    if (ToString(k) == text) return k;
  }
  return std::nullopt;
}

std::optional<Sense> ParseSense(std::string_view text) {
  for (Sense s : {Sense::kEqual, Sense::kGreaterEqual, Sense::kLessEqual}) {
    if (ToString(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<StorageBoundary> ParseStorageBoundary(std::string_view text) {
  if (text == "fixed") return StorageBoundary::kFixed;
  if (text == "cyclic") return StorageBoundary::kCyclic;
  return std::nullopt;
}

double ValueOr(const YearValues& values, int year, double fallback) {
  auto it = values.find(year);
  return it == values.end() ? fallback : it->second;
}

Sense EffectiveBalanceSense(const Asset& asset) {
  switch (asset.kind) {
    case AssetKind::kConversion:
    case AssetKind::kTransport:
    case AssetKind::kStorage:
      return Sense::kEqual;
    case AssetKind::kProduction:
      return asset.balance_sense.value_or(Sense::kGreaterEqual);
    case AssetKind::kConsumption:
      return asset.balance_sense.value_or(Sense::kEqual);
  }
  return Sense::kEqual;
}

std::set<std::string> ReserveProduct::providers() const {
  std::set<std::string> all = upward_providers;
  all.insert(downward_providers.begin(), downward_providers.end());
  return all;
}

const Asset& EnergySystem::asset(std::string_view id) const {
  auto it = assets.find(std::string(id));
  if (it == assets.end()) {
    throw std::out_of_range("unknown asset '" + std::string(id) + "'");
  }
  return it->second;
}

int EnergySystem::FlowResolution(const Flow& flow) const {
  if (flow.resolution_hours) return *flow.resolution_hours;
  return std::min(asset(flow.from).variable_resolution_hours,
                  asset(flow.to).variable_resolution_hours);
}

std::vector<const Flow*> EnergySystem::IncomingFlows(std::string_view id) const {
  std::vector<const Flow*> out;
  for (const Flow& f : flows) {
    if (f.to == id) out.push_back(&f);
  }
  return out;
}

std::vector<const Flow*> EnergySystem::OutgoingFlows(std::string_view id) const {
  std::vector<const Flow*> out;
  for (const Flow& f : flows) {
    if (f.from == id) out.push_back(&f);
  }
  return out;
}

std::string ToString(const Diagnostic& d) {
  return d.rule + " [" + d.subject + "]: " + d.message;
}

namespace {

class DiagnosticSink {
 public:
  void Add(std::string rule, std::string subject, std::string message) {
    diagnostics_.push_back(
        {std::move(rule), std::move(subject), std::move(message)});
  }
  std::vector<Diagnostic> Take() { return std::move(diagnostics_); }

 private:
  std::vector<Diagnostic> diagnostics_;
};

std::string PeriodLabel(const PeriodKey& key) {
  return "year " + std::to_string(key.first) + " period " +
         std::to_string(key.second);
}

// Checks that every (year, period) of `series` exists and has one value per
// block of the given resolution.
void CheckSeriesShape(const TemporalScope& scope, const PeriodSeries& series,
                      int resolution, const std::string& subject,
                      std::string_view name, DiagnosticSink& sink) {
  if (resolution < 1) return;
  for (const auto& [key, values] : series) {
    if (!scope.HasYear(key.first) || key.second < 1 ||
        key.second >
            static_cast<int>(scope.Year(key.first).rep_periods.size())) {
      sink.Add("series outside temporal scope", subject,
               std::string(name) + " given for undeclared " + PeriodLabel(key));
      continue;
    }
    const int hours = scope.Period(key.first, key.second).hours;
    const int blocks = (hours + resolution - 1) / resolution;
    if (static_cast<int>(values.size()) != blocks) {
      sink.Add("series length mismatch", subject,
               std::string(name) + " for " + PeriodLabel(key) + " has " +
                   std::to_string(values.size()) + " values, expected " +
                   std::to_string(blocks));
    }
  }
}

void CheckSeriesRange(const PeriodSeries& series, double lo, double hi,
                      const std::string& subject, std::string_view name,
                      std::string_view rule, DiagnosticSink& sink) {
  for (const auto& [key, values] : series) {
    for (double v : values) {
      if (!(v >= lo && v <= hi)) {
        sink.Add(std::string(rule), subject,
                 std::string(name) + " value " + std::to_string(v) + " in " +
                     PeriodLabel(key));
        break;
      }
    }
  }
}

bool CoversAllPeriods(const TemporalScope& scope, const PeriodSeries& series) {
  for (const MilestoneYear& y : scope.years) {
    for (int k = 1; k <= static_cast<int>(y.rep_periods.size()); ++k) {
      if (!series.contains({y.year, k})) return false;
    }
  }
  return true;
}

void ValidateScope(const TemporalScope& scope, DiagnosticSink& sink) {
  for (std::size_t i = 0; i < scope.years.size(); ++i) {
    const MilestoneYear& y = scope.years[i];
    const std::string subject = "year " + std::to_string(y.year);
    if (i > 0 && y.year <= scope.years[i - 1].year) {
      sink.Add("invalid temporal scope", subject,
               "milestone years must be strictly increasing");
    }
    if (!(y.weight >= 0)) {
      sink.Add("invalid temporal scope", subject, "negative year weight");
    }
    for (const RepresentativePeriod& rp : y.rep_periods) {
      if (rp.hours < 1) {
        sink.Add("invalid temporal scope", subject,
                 "representative period shorter than one hour");
      }
      if (!(rp.weight >= 0)) {
        sink.Add("invalid temporal scope", subject,
                 "negative representative period weight");
      }
    }
  }
  if (!(scope.interest_rate > -1.0)) {
    sink.Add("invalid temporal scope", "interest rate",
             "interest rate must exceed -1");
  }
}

void ValidateAsset(const EnergySystem& system, const Asset& a,
                   DiagnosticSink& sink) {
  const std::string& s = a.id;
  const TemporalScope& scope = system.scope;
  if (a.id.empty() || SanitizeId(a.id).empty()) {
    sink.Add("empty id", s, "asset id has no usable characters");
  }
  if (!(a.capacity_per_unit >= 0)) {
    sink.Add("negative capacity", s, "capacity per unit must be >= 0");
  }
  if (a.lifetime_years < 1) {
    sink.Add("lifetime below one", s, "lifetime must be at least one year");
  }
  if (a.variable_resolution_hours < 1 || a.profile_resolution_hours < 1) {
    sink.Add("nonpositive resolution", s, "resolutions must be >= 1 hour");
  }
  if (a.has_investment_method && !(a.capacity_per_unit > 0)) {
    sink.Add("investable asset lacks capacity", s,
             "investment needs a positive capacity per unit");
  }
  if (a.kind == AssetKind::kStorage && !(a.storage_initial_level >= 0)) {
    sink.Add("negative initial level", s, "storage initial level below 0");
  }
  for (const auto& [year, value] : a.initial_units_by_year) {
    if (!(value >= 0)) {
      sink.Add("negative initial units", s,
               "initial units below 0 in " + std::to_string(year));
    }
  }
  for (const auto& [year, value] : a.potential_by_year) {
    if (!(value >= 0)) {
      sink.Add("negative potential", s,
               "investment potential below 0 in " + std::to_string(year));
    }
  }
  for (const auto& [year, salvage] : a.salvage_value) {
    if (salvage > ValueOr(a.invest_cost, year, 0.0)) {
      sink.Add("salvage exceeds investment cost", s,
               "salvage value above investment cost in " +
                   std::to_string(year));
    }
  }

  CheckSeriesRange(a.max_profile, 0.0, 1.0, s, "max profile",
                   "profile out of range", sink);
  const double min_floor = a.kind == AssetKind::kTransport ? -1.0 : 0.0;
  CheckSeriesRange(a.min_profile, min_floor, 1.0, s, "min profile",
                   "profile out of range", sink);

  struct NamedSeries {
    const PeriodSeries* series;
    std::string_view name;
    AssetKind owner;
  };
  const NamedSeries all[] = {
      {&a.production_series, "production", AssetKind::kProduction},
      {&a.demand_series, "demand", AssetKind::kConsumption},
      {&a.inflow_series, "inflow", AssetKind::kStorage},
  };
  for (const NamedSeries& ns : all) {
    if (!ns.series->empty() && a.kind != ns.owner) {
      sink.Add("series not allowed for kind", s,
               std::string(ns.name) + " series on a " +
                   std::string(ToString(a.kind)) + " asset");
    }
  }
  for (const auto* series : {&a.max_profile, &a.min_profile,
                             &a.production_series, &a.demand_series,
                             &a.inflow_series}) {
    CheckSeriesShape(scope, *series, a.profile_resolution_hours, s,
                     series == &a.max_profile   ? "max profile"
                     : series == &a.min_profile ? "min profile"
                                                : "series",
                     sink);
  }
  for (const auto* series : {&a.production_series, &a.demand_series,
                             &a.inflow_series}) {
    for (const auto& [key, values] : *series) {
      if (std::any_of(values.begin(), values.end(),
                      [](double v) { return !std::isfinite(v); })) {
        sink.Add("non-finite series value", s, PeriodLabel(key));
      }
    }
  }

  if (a.has_balance_method) {
    if (a.kind == AssetKind::kProduction &&
        !CoversAllPeriods(scope, a.production_series)) {
      sink.Add("missing balance series", s,
               "producer with balance method needs production data for "
               "every representative period");
    }
    if (a.kind == AssetKind::kConsumption &&
        !CoversAllPeriods(scope, a.demand_series)) {
      sink.Add("missing balance series", s,
               "consumer with balance method needs demand data for every "
               "representative period");
    }
  }
}

}  // namespace

std::vector<Diagnostic> Validate(const EnergySystem& system) {
  DiagnosticSink sink;
  ValidateScope(system.scope, sink);

  std::map<std::string, std::string> sanitized;
  for (const auto& [id, a] : system.assets) {
    if (id != a.id) {
      sink.Add("asset key mismatch", id, "map key differs from asset id");
    }
    ValidateAsset(system, a, sink);
    auto [it, inserted] = sanitized.emplace(SanitizeId(id), id);
    if (!inserted) {
      sink.Add("sanitized id collision", id,
               "same generated name as '" + it->second + "'");
    }
  }

  std::set<std::pair<std::string, std::string>> seen_flows;
  for (const Flow& f : system.flows) {
    const std::string subject = f.from + "->" + f.to;
    const bool from_known = system.assets.contains(f.from);
    const bool to_known = system.assets.contains(f.to);
    if (!from_known || !to_known) {
      sink.Add("unknown flow endpoint", subject,
               "flow references an undeclared asset");
    }
    if (f.from == f.to) {
      sink.Add("self loop", subject, "flow starts and ends at one asset");
    }
    if (!(f.efficiency > 0)) {
      sink.Add("nonpositive efficiency", subject,
               "efficiency must be strictly positive");
    }
    if (f.resolution_hours && *f.resolution_hours < 1) {
      sink.Add("nonpositive resolution", subject,
               "flow resolution must be >= 1 hour");
    }
    if (!seen_flows.emplace(f.from, f.to).second) {
      sink.Add("duplicate flow", subject, "flow declared more than once");
    }
    if (from_known &&
        system.assets.at(f.from).kind == AssetKind::kConsumption) {
      sink.Add("consumer has output", subject,
               "consumption assets cannot have outgoing flows");
    }
    if (to_known && system.assets.at(f.to).kind == AssetKind::kProduction) {
      sink.Add("producer has input", subject,
               "production assets cannot have incoming flows");
    }
  }

  for (const ReserveProduct& r : system.reserves) {
    const std::string subject = "reserve " + r.id;
    if (r.requirement_resolution_hours < 1) {
      sink.Add("nonpositive resolution", subject,
               "requirement resolution must be >= 1 hour");
    }
    CheckSeriesShape(system.scope, r.requirement,
                     r.requirement_resolution_hours, subject, "requirement",
                     sink);
    bool positive = false;
    for (const auto& [key, values] : r.requirement) {
      for (double v : values) {
        if (!(v >= 0)) {
          sink.Add("negative reserve requirement", subject, PeriodLabel(key));
        }
        positive = positive || v > 0;
      }
    }
    const std::set<std::string> providers = r.providers();
    if (positive && providers.empty()) {
      sink.Add("reserve without providers", subject,
               "positive requirement but no provider");
    }
    for (const std::string& p : providers) {
      auto it = system.assets.find(p);
      if (it == system.assets.end()) {
        sink.Add("unknown reserve provider", subject,
                 "provider '" + p + "' is not an asset");
      } else if (!(it->second.capacity_per_unit > 0) ||
                 system.OutgoingFlows(p).empty()) {
        sink.Add("reserve provider lacks capacity", subject,
                 "provider '" + p +
                     "' needs a capacity and an outgoing flow to bound its "
                     "reserve");
      }
    }
  }
  return sink.Take();
}

std::set<std::string> NeighborsIn(const EnergySystem& system,
                                  std::string_view asset_id) {
  (void)system.asset(asset_id);
  std::set<std::string> out;
  for (const Flow* f : system.IncomingFlows(asset_id)) out.insert(f->from);
  return out;
}

std::set<std::string> NeighborsOut(const EnergySystem& system,
                                   std::string_view asset_id) {
  (void)system.asset(asset_id);
  std::set<std::string> out;
  for (const Flow* f : system.OutgoingFlows(asset_id)) out.insert(f->to);
  return out;
}

std::string SanitizeId(std::string_view id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) != 0;
    const char mapped = keep ? c : '_';
    if (mapped == '_' && (out.empty() || out.back() == '_')) continue;
    out.push_back(mapped);
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

}  // namespace flexplan

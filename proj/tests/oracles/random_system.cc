#include <set>

#include "oracles.h"

namespace flexplan::testing {
namespace {

class Gen {
 public:
  explicit Gen(std::mt19937& rng) : rng_(rng) {}
  int Int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool Coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  // Multiples of 1/4 in [lo, hi].
  double Quarter(double lo, double hi) {
    return Int(static_cast<int>(lo * 4), static_cast<int>(hi * 4)) / 4.0;
  }

  PeriodSeries Series(const TemporalScope& scope, double lo, double hi) {
    PeriodSeries s;
    for (const MilestoneYear& y : scope.years) {
      for (int k = 1; k <= static_cast<int>(y.rep_periods.size()); ++k) {
        std::vector<double> v;
        for (int t = 0; t < y.rep_periods[k - 1].hours; ++t) v.push_back(Quarter(lo, hi));
        s[{y.year, k}] = std::move(v);
      }
    }
    return s;
  }

  YearValues PerYear(const TemporalScope& scope, double lo, double hi) {
    YearValues v;
    for (const MilestoneYear& y : scope.years) v[y.year] = Quarter(lo, hi);
    return v;
  }

 private:
  std::mt19937& rng_;
};

Asset MakeAsset(const std::string& id, AssetKind kind) {
  Asset a;
  a.id = id;
  a.kind = kind;
  return a;
}

}  // namespace

EnergySystem RandomHourlySystem(std::mt19937& rng) {
  Gen g(rng);
  EnergySystem sys;
  sys.scope.interest_rate = g.Coin() ? 0.0 : 0.05;
  const int years = g.Int(1, 3);
  int label = 2030;
  for (int i = 0; i < years; ++i) {
    MilestoneYear y;
    y.year = label;
    label += g.Int(1, 5);
    y.weight = g.Int(1, 5);
    const int periods = g.Int(1, 2);
    for (int k = 0; k < periods; ++k) {
      y.rep_periods.push_back({g.Int(1, 5), static_cast<double>(g.Int(1, 10))});
    }
    sys.scope.years.push_back(std::move(y));
  }
  const TemporalScope& scope = sys.scope;

  auto add_limits = [&](Asset& a) {
    if (!g.Coin(0.7)) return;
    a.capacity_per_unit = g.Int(1, 20);
    a.initial_units_by_year = g.PerYear(scope, 0, 3);
    if (g.Coin(0.4)) {
      a.has_investment_method = true;
      a.lifetime_years = g.Int(1, 4);
      a.potential_by_year = g.PerYear(scope, 0, 60);
      a.invest_cost = g.PerYear(scope, 10, 100);
      a.salvage_value = g.PerYear(scope, 0, 5);
      a.units_integer = g.Coin(0.6);
    }
    if (g.Coin(0.5)) a.max_profile = g.Series(scope, 0, 1);
    if (g.Coin(0.3)) {
      a.min_profile = g.Series(scope, a.kind == AssetKind::kTransport ? -1 : 0, 0.5);
    }
    a.var_op_cost = g.PerYear(scope, 0, 8);
  };

  std::vector<std::string> producers;
  for (int i = 0, n = g.Int(1, 2); i < n; ++i) {
    Asset a = MakeAsset("prod" + std::to_string(i), AssetKind::kProduction);
    if (g.Coin(0.5)) {
      a.has_balance_method = true;
      a.production_series = g.Series(scope, 0, 40);
      if (g.Coin(0.3)) a.balance_sense = g.Coin() ? Sense::kEqual : Sense::kLessEqual;
    }
    add_limits(a);
    producers.push_back(a.id);
    sys.assets.emplace(a.id, std::move(a));
  }
  std::vector<std::string> consumers;
  for (int i = 0, n = g.Int(1, 2); i < n; ++i) {
    Asset a = MakeAsset("cons" + std::to_string(i), AssetKind::kConsumption);
    a.has_balance_method = true;
    a.demand_series = g.Series(scope, 0, 20);
    if (g.Coin(0.3)) a.balance_sense = g.Coin() ? Sense::kGreaterEqual : Sense::kLessEqual;
    consumers.push_back(a.id);
    sys.assets.emplace(a.id, std::move(a));
  }
  std::vector<std::string> middles;
  if (g.Coin(0.6)) {
    Asset a = MakeAsset("conv", AssetKind::kConversion);
    a.has_balance_method = true;
    add_limits(a);
    middles.push_back(a.id);
    sys.assets.emplace(a.id, std::move(a));
  }
  if (g.Coin(0.6)) {
    Asset a = MakeAsset("line", AssetKind::kTransport);
    a.has_balance_method = true;
    add_limits(a);
    middles.push_back(a.id);
    sys.assets.emplace(a.id, std::move(a));
  }
  if (g.Coin(0.6)) {
    Asset a = MakeAsset("store", AssetKind::kStorage);
    a.has_balance_method = true;
    a.storage_boundary = g.Coin() ? StorageBoundary::kCyclic : StorageBoundary::kFixed;
    a.storage_initial_level = g.Quarter(0, 10);
    if (g.Coin(0.4)) a.inflow_series = g.Series(scope, 0, 5);
    add_limits(a);
    middles.push_back(a.id);
    sys.assets.emplace(a.id, std::move(a));
  }

  auto efficiency = [&g] { return g.Coin(0.5) ? 1.0 : g.Int(2, 10) / 10.0; };
  auto connect = [&](const std::string& from, const std::string& to) {
    sys.flows.push_back({from, to, efficiency(), std::nullopt});
  };
  for (const std::string& p : producers) {
    connect(p, consumers[g.Int(0, static_cast<int>(consumers.size()) - 1)]);
  }
  for (const std::string& m : middles) {
    connect(producers[g.Int(0, static_cast<int>(producers.size()) - 1)], m);
    connect(m, consumers[g.Int(0, static_cast<int>(consumers.size()) - 1)]);
  }
  for (const std::string& c : consumers) {
    if (sys.IncomingFlows(c).empty()) connect(producers.front(), c);
  }
  // Drop accidental duplicates.
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<Flow> unique;
  for (Flow& f : sys.flows) {
    if (seen.emplace(f.from, f.to).second) unique.push_back(std::move(f));
  }
  sys.flows = std::move(unique);

  std::vector<std::string> capable;
  for (const auto& [id, a] : sys.assets) {
    if (a.capacity_per_unit > 0 && !sys.OutgoingFlows(id).empty()) capable.push_back(id);
  }
  if (!capable.empty() && g.Coin(0.5)) {
    ReserveProduct r;
    r.id = "spin";
    r.requirement = g.Series(scope, 0, 3);
    for (const std::string& id : capable) {
      if (g.Coin(0.6)) r.upward_providers.insert(id);
      if (g.Coin(0.3)) r.downward_providers.insert(id);
    }
    if (r.providers().empty()) r.upward_providers.insert(capable.front());
    sys.reserves.push_back(std::move(r));
  }
  return sys;
}

}  // namespace flexplan::testing

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include "tomlplusplus/toml.hpp"

#include "csv.h"
#include "flexplan/io.h"

namespace flexplan {

ParseError::ParseError(std::string file, int line, int column,
                       const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + what),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

namespace {

std::string JoinDiagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out = "scenario has " + std::to_string(diagnostics.size()) +
                    " problem(s)";
  for (const Diagnostic& d : diagnostics) out += "\n  " + ToString(d);
  return out;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics,
                             bool input_error)
    : std::runtime_error(JoinDiagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)),
      input_error_(input_error) {}

std::string FormatNumber(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

namespace {

class Collector {
 public:
  void Input(std::string subject, std::string message) {
    diagnostics_.push_back({"input error", std::move(subject), std::move(message)});
    input_error_ = true;
  }
  void Rule(std::string rule, std::string subject, std::string message) {
    diagnostics_.push_back({std::move(rule), std::move(subject), std::move(message)});
  }
  bool empty() const { return diagnostics_.empty(); }
  std::vector<Diagnostic>& diagnostics() { return diagnostics_; }
  bool input_error() const { return input_error_; }

 private:
  std::vector<Diagnostic> diagnostics_;
  bool input_error_ = false;
};

std::string Location(const std::string& file, int line, int column) {
  return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

// Typed access to the fields of one CSV row; malformed values are reported
// with their location and come back empty.
class RowReader {
 public:
  RowReader(const csv::Table& table, const csv::Row& row, Collector& sink)
      : table_(table), row_(row), sink_(sink) {}

  std::string where(const std::string& column = "") const {
    const int c = column.empty() ? 1 : table_.Column(column) + 1;
    return Location(table_.file, row_.line, std::max(c, 1));
  }

  std::string Text(const std::string& column) const {
    const int c = table_.Column(column);
    return c < 0 ? std::string() : row_.fields[c];
  }

  std::optional<double> Double(const std::string& column, bool required) const {
    const std::string text = Text(column);
    if (text.empty()) {
      if (required) sink_.Input(where(column), "missing value for " + column);
      return std::nullopt;
    }
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      sink_.Input(where(column), "'" + text + "' is not a number");
      return std::nullopt;
    }
    return value;
  }

  std::optional<int> Int(const std::string& column, bool required) const {
    const std::string text = Text(column);
    if (text.empty()) {
      if (required) sink_.Input(where(column), "missing value for " + column);
      return std::nullopt;
    }
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      sink_.Input(where(column), "'" + text + "' is not an integer");
      return std::nullopt;
    }
    return value;
  }

  std::optional<bool> Bool(const std::string& column) const {
    std::string text = Text(column);
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (text.empty()) return std::nullopt;
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    sink_.Input(where(column), "'" + text + "' is not a boolean");
    return std::nullopt;
  }

 private:
  const csv::Table& table_;
  const csv::Row& row_;
  Collector& sink_;
};

std::optional<csv::Table> ReadTable(const std::filesystem::path& dir,
                                    const std::string& name, bool required,
                                    const std::vector<std::string>& columns,
                                    Collector& sink) {
  const std::filesystem::path path = dir / name;
  if (!std::filesystem::exists(path)) {
    if (required) sink.Input(name, "missing file");
    return std::nullopt;
  }
  try {
    csv::Table table = csv::Read(path);
    bool ok = true;
    for (const std::string& c : columns) {
      if (table.Column(c) < 0) {
        sink.Input(Location(name, 1, 1), "missing column '" + c + "'");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return table;
  } catch (const ParseError& e) {
    sink.Input(Location(e.file(), e.line(), e.column()), e.what());
  } catch (const IoError& e) {
    sink.Input(name, e.what());
  }
  return std::nullopt;
}

TemporalScope ReadScope(const std::filesystem::path& dir, Collector& sink) {
  TemporalScope scope;
  const std::filesystem::path path = dir / "scenario.toml";
  if (!std::filesystem::exists(path)) {
    sink.Input("scenario.toml", "missing file");
    return scope;
  }
  toml::table root;
  try {
    root = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    sink.Input(Location("scenario.toml", static_cast<int>(e.source().begin.line),
                        static_cast<int>(e.source().begin.column)),
               std::string(e.description()));
    return scope;
  }
  scope.interest_rate = root["interest_rate"].value_or(0.0);
  const toml::array* years = root["years"].as_array();
  if (years == nullptr) {
    sink.Input("scenario.toml", "missing [[years]] tables");
    return scope;
  }
  for (const toml::node& node : *years) {
    const toml::table* t = node.as_table();
    const auto line = static_cast<int>(node.source().begin.line);
    if (t == nullptr || !(*t)["year"].is_integer()) {
      sink.Input(Location("scenario.toml", line, 1),
                 "each [[years]] entry needs an integer 'year'");
      continue;
    }
    MilestoneYear y;
    y.year = static_cast<int>((*t)["year"].value_or<std::int64_t>(0));
    y.weight = (*t)["weight"].value_or(1.0);
    if (const toml::array* rps = (*t)["rep_periods"].as_array()) {
      for (const toml::node& rp_node : *rps) {
        const toml::table* rp = rp_node.as_table();
        if (rp == nullptr || !(*rp)["hours"].is_integer()) {
          sink.Input(Location("scenario.toml",
                              static_cast<int>(rp_node.source().begin.line), 1),
                     "each rep period needs an integer 'hours'");
          continue;
        }
        y.rep_periods.push_back(
            {static_cast<int>((*rp)["hours"].value_or<std::int64_t>(0)),
             (*rp)["weight"].value_or(1.0)});
      }
    }
    scope.years.push_back(std::move(y));
  }
  return scope;
}

// Blocks gathered row by row before being turned into dense vectors.
using BlockValues = std::map<PeriodKey, std::map<int, std::pair<double, std::string>>>;

void AddBlock(BlockValues& values, const RowReader& row, Collector& sink,
              const std::string& value_column) {
  const auto year = row.Int("year", true);
  const auto k = row.Int("rep_period", true);
  const auto block = row.Int("block", true);
  const auto value = row.Double(value_column, true);
  if (!year || !k || !block || !value) return;
  if (*block < 1) {
    sink.Input(row.where("block"), "block indices start at 1");
    return;
  }
  auto [it, inserted] =
      values[{*year, *k}].emplace(*block, std::make_pair(*value, row.where()));
  if (!inserted) sink.Input(row.where("block"), "duplicate block");
}

PeriodSeries Densify(const BlockValues& values, const TemporalScope& scope,
                     int resolution, Collector& sink) {
  PeriodSeries series;
  for (const auto& [key, blocks] : values) {
    int limit = -1;
    if (scope.HasYear(key.first) && key.second >= 1 &&
        key.second <= static_cast<int>(scope.Year(key.first).rep_periods.size()) &&
        resolution >= 1) {
      const int hours = scope.Period(key.first, key.second).hours;
      limit = (hours + resolution - 1) / resolution;
    } else {
      sink.Rule("series outside temporal scope", blocks.begin()->second.second,
                "year " + std::to_string(key.first) + " period " +
                    std::to_string(key.second) + " is not declared");
      continue;
    }
    std::vector<double> dense;
    bool ok = true;
    int expected = 1;
    for (const auto& [block, entry] : blocks) {
      if (block != expected) {
        sink.Input(entry.second, "block " + std::to_string(expected) +
                                     " missing before block " +
                                     std::to_string(block));
        ok = false;
        break;
      }
      if (block > limit) {
        sink.Input(entry.second, "block " + std::to_string(block) +
                                     " beyond the horizon (" +
                                     std::to_string(limit) + " blocks)");
        ok = false;
        break;
      }
      dense.push_back(entry.first);
      ++expected;
    }
    if (ok) series[key] = std::move(dense);
  }
  return series;
}

}  // namespace

EnergySystem LoadScenario(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ScenarioError({{"input error", dir.string(), "not a directory"}},
                        true);
  }
  Collector sink;
  EnergySystem system;
  system.scope = ReadScope(dir, sink);

  const auto assets = ReadTable(dir, "assets.csv", true, {"id", "kind"}, sink);
  if (assets) {
    if (assets->rows.empty()) sink.Input("assets.csv", "no assets");
    for (const csv::Row& r : assets->rows) {
      RowReader row(*assets, r, sink);
      Asset a;
      a.id = row.Text("id");
      if (a.id.empty()) {
        sink.Input(row.where("id"), "missing asset id");
        continue;
      }
      const auto kind = ParseAssetKind(row.Text("kind"));
      if (!kind) {
        sink.Input(row.where("kind"), "unknown kind '" + row.Text("kind") + "'");
        continue;
      }
      a.kind = *kind;
      a.has_balance_method = row.Bool("balance").value_or(false);
      if (const std::string s = row.Text("balance_sense"); !s.empty()) {
        a.balance_sense = ParseSense(s);
        if (!a.balance_sense) {
          sink.Input(row.where("balance_sense"), "unknown sense '" + s + "'");
        }
      }
      a.has_investment_method = row.Bool("investable").value_or(false);
      a.capacity_per_unit = row.Double("capacity", false).value_or(0.0);
      a.lifetime_years = row.Int("lifetime", false).value_or(1);
      a.variable_resolution_hours =
          row.Int("variable_resolution", false).value_or(1);
      a.profile_resolution_hours =
          row.Int("profile_resolution", false).value_or(1);
      a.units_integer = row.Bool("units_integer").value_or(true);
      if (const std::string s = row.Text("storage_boundary"); !s.empty()) {
        const auto b = ParseStorageBoundary(s);
        if (b) {
          a.storage_boundary = *b;
        } else {
          sink.Input(row.where("storage_boundary"),
                     "unknown storage boundary '" + s + "'");
        }
      }
      a.storage_initial_level = row.Double("storage_initial", false).value_or(0.0);
      const std::string id = a.id;
      if (!system.assets.emplace(id, std::move(a)).second) {
        sink.Input(row.where("id"), "duplicate asset '" + id + "'");
      }
    }
  }

  auto unknown_asset = [&](const RowReader& row, const std::string& column,
                           const std::string& id) {
    if (system.assets.contains(id)) return false;
    sink.Rule("unknown reference", row.where(column),
              "asset '" + id + "' is not declared in assets.csv");
    return true;
  };

  if (const auto years = ReadTable(dir, "asset_years.csv", false,
                                   {"asset", "year"}, sink)) {
    for (const csv::Row& r : years->rows) {
      RowReader row(*years, r, sink);
      const std::string id = row.Text("asset");
      const auto year = row.Int("year", true);
      if (unknown_asset(row, "asset", id) || !year) continue;
      Asset& a = system.assets.at(id);
      const std::pair<const char*, YearValues*> columns[] = {
          {"potential", &a.potential_by_year},
          {"initial_units", &a.initial_units_by_year},
          {"var_op_cost", &a.var_op_cost},
          {"invest_cost", &a.invest_cost},
          {"salvage_value", &a.salvage_value},
      };
      for (const auto& [column, target] : columns) {
        if (const auto v = row.Double(column, false)) {
          if (!target->emplace(*year, *v).second) {
            sink.Input(row.where(column), "duplicate year " +
                                              std::to_string(*year));
          }
        }
      }
    }
  }

  if (const auto flows = ReadTable(dir, "flows.csv", true,
                                   {"from", "to", "efficiency"}, sink)) {
    for (const csv::Row& r : flows->rows) {
      RowReader row(*flows, r, sink);
      Flow f;
      f.from = row.Text("from");
      f.to = row.Text("to");
      const bool bad_from = unknown_asset(row, "from", f.from);
      const bool bad_to = unknown_asset(row, "to", f.to);
      const auto eff = row.Double("efficiency", false);
      f.efficiency = eff.value_or(1.0);
      f.resolution_hours = row.Int("resolution", false);
      if (!bad_from && !bad_to) system.flows.push_back(std::move(f));
    }
  }

  std::map<std::pair<std::string, std::string>, BlockValues> asset_series;
  if (const auto profiles = ReadTable(
          dir, "profiles.csv", false,
          {"asset", "profile", "year", "rep_period", "block", "value"}, sink)) {
    for (const csv::Row& r : profiles->rows) {
      RowReader row(*profiles, r, sink);
      const std::string id = row.Text("asset");
      const std::string type = row.Text("profile");
      if (type != "max" && type != "min") {
        sink.Input(row.where("profile"), "profile must be 'max' or 'min'");
        continue;
      }
      if (unknown_asset(row, "asset", id)) continue;
      AddBlock(asset_series[{id, type}], row, sink, "value");
    }
  }
  if (const auto series = ReadTable(
          dir, "series.csv", false,
          {"asset", "series", "year", "rep_period", "block", "value"}, sink)) {
    for (const csv::Row& r : series->rows) {
      RowReader row(*series, r, sink);
      const std::string id = row.Text("asset");
      const std::string type = row.Text("series");
      if (type != "production" && type != "demand" && type != "inflow") {
        sink.Input(row.where("series"),
                   "series must be production, demand or inflow");
        continue;
      }
      if (unknown_asset(row, "asset", id)) continue;
      AddBlock(asset_series[{id, type}], row, sink, "value");
    }
  }
  for (const auto& [key, values] : asset_series) {
    Asset& a = system.assets.at(key.first);
    PeriodSeries dense =
        Densify(values, system.scope, a.profile_resolution_hours, sink);
    if (key.second == "max") a.max_profile = std::move(dense);
    else if (key.second == "min") a.min_profile = std::move(dense);
    else if (key.second == "production") a.production_series = std::move(dense);
    else if (key.second == "demand") a.demand_series = std::move(dense);
    else a.inflow_series = std::move(dense);
  }

  std::map<std::string, BlockValues> requirements;
  std::map<std::string, ReserveProduct> reserves;
  std::vector<std::string> reserve_order;
  if (const auto table = ReadTable(dir, "reserves.csv", false,
                                   {"reserve", "resolution"}, sink)) {
    for (const csv::Row& r : table->rows) {
      RowReader row(*table, r, sink);
      const std::string id = row.Text("reserve");
      const auto resolution = row.Int("resolution", true);
      if (id.empty() || !resolution) continue;
      auto [it, inserted] = reserves.try_emplace(id);
      if (inserted) {
        it->second.id = id;
        it->second.requirement_resolution_hours = *resolution;
        reserve_order.push_back(id);
      } else if (it->second.requirement_resolution_hours != *resolution) {
        sink.Input(row.where("resolution"),
                   "resolution differs from earlier rows of reserve '" + id + "'");
      }
      // A row without a year only declares the product.
      if (!row.Text("year").empty()) {
        AddBlock(requirements[id], row, sink, "requirement");
      }
    }
  }
  for (const auto& [id, values] : requirements) {
    ReserveProduct& r = reserves.at(id);
    r.requirement = Densify(values, system.scope,
                            r.requirement_resolution_hours, sink);
  }
  if (const auto table = ReadTable(dir, "reserve_providers.csv", false,
                                   {"reserve", "asset", "direction"}, sink)) {
    for (const csv::Row& r : table->rows) {
      RowReader row(*table, r, sink);
      const std::string id = row.Text("reserve");
      const std::string asset = row.Text("asset");
      const std::string direction = row.Text("direction");
      auto it = reserves.find(id);
      if (it == reserves.end()) {
        sink.Rule("unknown reference", row.where("reserve"),
                  "reserve '" + id + "' is not declared in reserves.csv");
        continue;
      }
      if (unknown_asset(row, "asset", asset)) continue;
      if (direction == "up") {
        it->second.upward_providers.insert(asset);
      } else if (direction == "down") {
        it->second.downward_providers.insert(asset);
      } else {
        sink.Input(row.where("direction"), "direction must be 'up' or 'down'");
      }
    }
  }
  for (const std::string& id : reserve_order) {
    system.reserves.push_back(std::move(reserves.at(id)));
  }

  if (sink.empty()) {
    for (Diagnostic& d : Validate(system)) {
      sink.Rule(std::move(d.rule), std::move(d.subject), std::move(d.message));
    }
  }
  if (!sink.empty()) {
    throw ScenarioError(std::move(sink.diagnostics()), sink.input_error());
  }
  return system;
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header)
      : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path.string());
    Row(header);
  }
  void Row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << csv::Escape(fields[i]);
    }
    out_ << '\n';
  }
  ~CsvWriter() = default;
  void Close() {
    out_.close();
    if (!out_) throw IoError("failed writing " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string Opt(const YearValues& values, int year) {
  auto it = values.find(year);
  return it == values.end() ? std::string() : FormatNumber(it->second);
}

void WriteSeries(CsvWriter& w, const std::string& id, const std::string& type,
                 const PeriodSeries& series) {
  for (const auto& [key, values] : series) {
    for (std::size_t b = 0; b < values.size(); ++b) {
      w.Row({id, type, std::to_string(key.first), std::to_string(key.second),
             std::to_string(b + 1), FormatNumber(values[b])});
    }
  }
}

}  // namespace

void WriteScenario(const EnergySystem& system,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  {
    std::ofstream toml_out(dir / "scenario.toml", std::ios::binary);
    if (!toml_out) throw IoError("cannot write scenario.toml");
    toml_out << "interest_rate = " << FormatNumber(system.scope.interest_rate)
             << "\n";
    for (const MilestoneYear& y : system.scope.years) {
      toml_out << "\n[[years]]\nyear = " << y.year
               << "\nweight = " << FormatNumber(y.weight) << "\n";
      for (const RepresentativePeriod& rp : y.rep_periods) {
        toml_out << "\n  [[years.rep_periods]]\n  hours = " << rp.hours
                 << "\n  weight = " << FormatNumber(rp.weight) << "\n";
      }
    }
    // toml++ writes floats like 1.0 as "1.0"; FormatNumber writes "1", which
    // TOML reads as an integer and value_or(double) still accepts.
  }

  {
    CsvWriter w(dir / "assets.csv",
                {"id", "kind", "balance", "balance_sense", "investable",
                 "capacity", "lifetime", "variable_resolution",
                 "profile_resolution", "units_integer", "storage_boundary",
                 "storage_initial"});
    for (const auto& [id, a] : system.assets) {
      w.Row({id, std::string(ToString(a.kind)),
             a.has_balance_method ? "true" : "false",
             a.balance_sense ? std::string(ToString(*a.balance_sense)) : "",
             a.has_investment_method ? "true" : "false",
             FormatNumber(a.capacity_per_unit), std::to_string(a.lifetime_years),
             std::to_string(a.variable_resolution_hours),
             std::to_string(a.profile_resolution_hours),
             a.units_integer ? "true" : "false",
             std::string(ToString(a.storage_boundary)),
             FormatNumber(a.storage_initial_level)});
    }
    w.Close();
  }
  {
    CsvWriter w(dir / "asset_years.csv",
                {"asset", "year", "potential", "initial_units", "var_op_cost",
                 "invest_cost", "salvage_value"});
    for (const auto& [id, a] : system.assets) {
      std::set<int> years;
      for (const YearValues* v :
           {&a.potential_by_year, &a.initial_units_by_year, &a.var_op_cost,
            &a.invest_cost, &a.salvage_value}) {
        for (const auto& [year, value] : *v) years.insert(year);
      }
      for (int year : years) {
        w.Row({id, std::to_string(year), Opt(a.potential_by_year, year),
               Opt(a.initial_units_by_year, year), Opt(a.var_op_cost, year),
               Opt(a.invest_cost, year), Opt(a.salvage_value, year)});
      }
    }
    w.Close();
  }
  {
    CsvWriter w(dir / "flows.csv", {"from", "to", "efficiency", "resolution"});
    for (const Flow& f : system.flows) {
      w.Row({f.from, f.to, FormatNumber(f.efficiency),
             f.resolution_hours ? std::to_string(*f.resolution_hours) : ""});
    }
    w.Close();
  }
  {
    CsvWriter w(dir / "profiles.csv",
                {"asset", "profile", "year", "rep_period", "block", "value"});
    for (const auto& [id, a] : system.assets) {
      WriteSeries(w, id, "max", a.max_profile);
      WriteSeries(w, id, "min", a.min_profile);
    }
    w.Close();
  }
  {
    CsvWriter w(dir / "series.csv",
                {"asset", "series", "year", "rep_period", "block", "value"});
    for (const auto& [id, a] : system.assets) {
      WriteSeries(w, id, "production", a.production_series);
      WriteSeries(w, id, "demand", a.demand_series);
      WriteSeries(w, id, "inflow", a.inflow_series);
    }
    w.Close();
  }
  {
    CsvWriter w(dir / "reserves.csv", {"reserve", "resolution", "year",
                                       "rep_period", "block", "requirement"});
    for (const ReserveProduct& r : system.reserves) {
      const std::string res = std::to_string(r.requirement_resolution_hours);
      if (r.requirement.empty()) w.Row({r.id, res, "", "", "", ""});
      for (const auto& [key, values] : r.requirement) {
        for (std::size_t b = 0; b < values.size(); ++b) {
          w.Row({r.id, res, std::to_string(key.first),
                 std::to_string(key.second), std::to_string(b + 1),
                 FormatNumber(values[b])});
        }
      }
    }
    w.Close();
  }
  {
    CsvWriter w(dir / "reserve_providers.csv", {"reserve", "asset", "direction"});
    for (const ReserveProduct& r : system.reserves) {
      for (const std::string& a : r.upward_providers) w.Row({r.id, a, "up"});
      for (const std::string& a : r.downward_providers) w.Row({r.id, a, "down"});
    }
    w.Close();
  }
}

}  // namespace flexplan

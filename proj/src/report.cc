#include <fstream>

#include "csv.h"
#include "flexplan/io.h"

namespace flexplan {

CostSplit SplitObjective(const ModelInstance& model,
                         const std::vector<double>& primal) {
  CostSplit split;
  split.constant = model.objective().constant;
  if (primal.empty()) return split;
  for (const ObjectiveTerm& t : model.objective().terms) {
    const auto index = model.IndexOf(t.var);
    if (!index) continue;
    const double value = t.coef * primal[*index];
    if (t.var.kind == VariableKind::kUnitsInvested) {
      split.investment += value;
    } else {
      split.operational += value;
    }
  }
  return split;
}

namespace {

class ReportFile {
 public:
  ReportFile(const std::filesystem::path& path,
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
  void Close() {
    out_.close();
    if (!out_) throw IoError("failed writing " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace

void WriteReport(const EnergySystem& system, const ModelInstance& model,
                 const Solution& solution, const std::filesystem::path& dir) {
  (void)system;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  ReportFile flows(dir / "flows.csv",
                   {"year", "from", "to", "rep_period", "block", "mwh"});
  ReportFile storage(dir / "storage.csv",
                     {"year", "asset", "rep_period", "block", "mwh"});
  ReportFile reserves(dir / "reserves.csv",
                      {"year", "asset", "reserve", "rep_period", "block", "mwh"});
  ReportFile units(dir / "units.csv", {"year", "asset", "variable",
                                       "rep_period", "block", "value"});
  const std::vector<double>& x = solution.primal;
  if (x.size() == model.variables().size()) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const VariableRef& r = model.variables()[j].ref;
      const std::string year = std::to_string(r.year);
      const std::string k = std::to_string(r.rep_period);
      const std::string b = std::to_string(r.block);
      const std::string v = FormatNumber(x[j]);
      switch (r.kind) {
        case VariableKind::kFlow:
          flows.Row({year, r.asset, r.second, k, b, v});
          break;
        case VariableKind::kStorageLevel:
          storage.Row({year, r.asset, k, b, v});
          break;
        case VariableKind::kReserve:
          reserves.Row({year, r.asset, r.second, k, b, v});
          break;
        case VariableKind::kUnitsOn:
          units.Row({year, r.asset, "units_on", k, b, v});
          break;
        case VariableKind::kUnitsInvested:
          units.Row({year, r.asset, "units_invested", "", "", v});
          break;
      }
    }
  }
  flows.Close();
  storage.Close();
  reserves.Close();
  units.Close();

  ReportFile objective(dir / "objective.csv", {"component", "value"});
  if (x.size() == model.variables().size() && !x.empty()) {
    const CostSplit split = SplitObjective(model, x);
    objective.Row({"investment", FormatNumber(split.investment)});
    objective.Row({"operational", FormatNumber(split.operational)});
    objective.Row({"total", FormatNumber(split.total())});
  }
  objective.Close();
}

namespace {

std::string_view Shape(AssetKind kind) {
  switch (kind) {
    case AssetKind::kConversion: return "box";
    case AssetKind::kProduction: return "house";
    case AssetKind::kConsumption: return "invhouse";
    case AssetKind::kTransport: return "ellipse";
    case AssetKind::kStorage: return "cylinder";
  }
  return "box";
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string FormatDot(const EnergySystem& system) {
  std::string out = "digraph energy_system {\n  rankdir=LR;\n";
  for (const auto& [id, a] : system.assets) {
    out += "  " + Quote(id) + " [shape=" + std::string(Shape(a.kind)) +
           ", label=" + Quote(id + "\\n" + std::string(ToString(a.kind))) +
           "];\n";
  }
  for (const Flow& f : system.flows) {
    out += "  " + Quote(f.from) + " -> " + Quote(f.to) + " [label=" +
           Quote(std::to_string(system.FlowResolution(f)) + "h, eta " +
                 FormatNumber(f.efficiency)) +
           "];\n";
  }
  return out + "}\n";
}

void WriteDot(const EnergySystem& system, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << FormatDot(system);
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace flexplan

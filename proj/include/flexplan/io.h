#ifndef FLEXPLAN_IO_H_
#define FLEXPLAN_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flexplan/model.h"
#include "flexplan/solver.h"
#include "flexplan/system.h"

namespace flexplan {

// File missing, unreadable or unwritable.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text with its location (1-based line and column).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, int column, const std::string& what);
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string file_;
  int line_;
  int column_;
};

// Everything wrong with a scenario directory, collected before failing.
// `input_error` is set when any problem is an unreadable file or a parse
// failure rather than a modelling rule.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::vector<Diagnostic> diagnostics, bool input_error);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  bool input_error() const { return input_error_; }

 private:
  std::vector<Diagnostic> diagnostics_;
  bool input_error_;
};

// Reads scenario.toml, assets.csv and flows.csv plus the optional
// asset_years.csv, profiles.csv, series.csv, reserves.csv and
// reserve_providers.csv, then validates. Throws ScenarioError.
EnergySystem LoadScenario(const std::filesystem::path& dir);

// Inverse of LoadScenario; creates `dir` if needed. Throws IoError.
void WriteScenario(const EnergySystem& system, const std::filesystem::path& dir);

// CPLEX-style LP text: Minimize / Subject To / Bounds / General / End.
std::string FormatLp(const ModelInstance& model);
void WriteLp(const ModelInstance& model, const std::filesystem::path& path);
// Throws ParseError with the location of the offending token.
ModelInstance ParseLp(std::string_view text, std::string_view source = "<lp>");
ModelInstance ReadLp(const std::filesystem::path& path);

struct CostSplit {
  double investment = 0.0;
  double operational = 0.0;
  double constant = 0.0;
  double total() const { return investment + operational + constant; }
};

// Objective contributions of units_invested (investment) and flow
// (operational) terms at the given primal point.
CostSplit SplitObjective(const ModelInstance& model,
                         const std::vector<double>& primal);

// flows.csv, storage.csv, units.csv and objective.csv under `dir`. An empty
// primal vector writes headers only.
void WriteReport(const EnergySystem& system, const ModelInstance& model,
                 const Solution& solution, const std::filesystem::path& dir);

// Graphviz digraph of assets and flows.
std::string FormatDot(const EnergySystem& system);
void WriteDot(const EnergySystem& system, const std::filesystem::path& path);

// Shortest decimal text that reads back to the same double.
std::string FormatNumber(double value);

}  // namespace flexplan

#endif  // FLEXPLAN_IO_H_

#include "flexplan/cli.h"

#include <cstdio>
#include <ostream>

#include "CLI11.hpp"
#include "flexplan/io.h"
#include "flexplan/model.h"
#include "flexplan/solver.h"

namespace flexplan {
namespace {

struct Config {
  std::string input_dir;
  std::string lp_path;
  std::string out_dir;
  std::string dot_path;
  std::string storage_cycle;
  bool relax_integrality = false;
  SolverOptions solver;
};

std::string Number17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

bool HasInteger(const LpProblem& problem) {
  for (bool b : problem.integer) {
    if (b) return true;
  }
  return false;
}

BuildOptions MakeBuildOptions(const Config& config) {
  BuildOptions options;
  options.relax_integrality = config.relax_integrality;
  if (!config.storage_cycle.empty()) {
    options.storage_boundary = *ParseStorageBoundary(config.storage_cycle);
  }
  return options;
}

struct Solved {
  EnergySystem system;
  ModelInstance model;
  Solution solution;
};

Solved SolveScenario(const Config& config) {
  Solved s;
  s.system = LoadScenario(config.input_dir);
  s.model = Assemble(s.system, MakeBuildOptions(config));
  const LpProblem problem = ToLpProblem(s.model);
  s.solution = HasInteger(problem) ? SolveMilp(problem, config.solver)
                                   : SolveLp(problem, config.solver);
  return s;
}

int Dispatch(const std::string& command, const Config& config,
             std::ostream& out, std::ostream& err) {
  if (command == "validate") {
    const EnergySystem system = LoadScenario(config.input_dir);
    err << "valid: " << system.assets.size() << " assets, "
        << system.flows.size() << " flows\n";
    return kExitOk;
  }
  if (command == "build") {
    const EnergySystem system = LoadScenario(config.input_dir);
    const ModelInstance model = Assemble(system, MakeBuildOptions(config));
    WriteLp(model, config.lp_path);
    err << "wrote " << config.lp_path << ": " << model.variables().size()
        << " variables, " << model.constraints().size() << " constraints\n";
    return kExitOk;
  }
  if (command == "graph") {
    WriteDot(LoadScenario(config.input_dir), config.dot_path);
    return kExitOk;
  }
  const Solved s = SolveScenario(config);
  const bool optimal = s.solution.status == SolveStatus::kOptimal;
  if (command == "solve") {
    out << "status=" << ToString(s.solution.status)
        << " objective=" << (optimal ? Number17(s.solution.objective) : "nan")
        << "\n";
  } else {
    WriteReport(s.system, s.model, optimal ? s.solution : Solution{},
                config.out_dir);
  }
  if (!optimal) {
    err << "solver finished with status " << ToString(s.solution.status)
        << "\n";
    return kExitNotOptimal;
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Energy investment and operation model builder and solver",
               "flexplan"};
  app.require_subcommand(1, 1);
  Config config;

  auto add_common = [&config](CLI::App* sub) {
    sub->add_option("input_dir", config.input_dir, "Scenario directory")
        ->required();
    sub->add_flag("--relax-integrality", config.relax_integrality,
                  "Treat all unit variables as continuous");
    sub->add_option("--storage-cycle", config.storage_cycle,
                    "Override storage boundary for every asset")
        ->check(CLI::IsMember({"fixed", "cyclic"}));
  };
  auto add_solver = [&config](CLI::App* sub) {
    sub->add_option("--max-iterations", config.solver.max_iterations,
                    "Simplex iteration limit")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-nodes", config.solver.max_nodes,
                    "Branch-and-bound node limit")
        ->check(CLI::PositiveNumber);
    sub->add_option("--feasibility-tol", config.solver.feasibility_tol,
                    "Primal feasibility tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--integrality-tol", config.solver.integrality_tol,
                    "Integrality tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--gap-tol", config.solver.gap_tol,
                    "Relative optimality gap")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario");
  add_common(validate);
  CLI::App* build = app.add_subcommand("build", "Write the model as LP text");
  add_common(build);
  build->add_option("--lp", config.lp_path, "Output LP file")->required();
  CLI::App* solve = app.add_subcommand("solve", "Solve and print a summary");
  add_common(solve);
  add_solver(solve);
  CLI::App* report = app.add_subcommand("report", "Solve and write CSV results");
  add_common(report);
  add_solver(report);
  report->add_option("--out", config.out_dir, "Output directory")->required();
  CLI::App* graph = app.add_subcommand("graph", "Write the asset graph as DOT");
  add_common(graph);
  graph->add_option("--dot", config.dot_path, "Output DOT file")->required();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return Dispatch(command, config, out, err);
  } catch (const ScenarioError& e) {
    for (const Diagnostic& d : e.diagnostics()) err << ToString(d) << "\n";
    return e.input_error() ? kExitIo : kExitInvalid;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kExitIo;
  } catch (const ModelError& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace flexplan

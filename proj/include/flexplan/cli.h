#ifndef FLEXPLAN_CLI_H_
#define FLEXPLAN_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace flexplan {

enum ExitCode {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitNotOptimal = 2,
  kExitIo = 3,
};

// Runs one subcommand. `args` includes the program name. Diagnostics go to
// `err`; the solve summary line goes to `out`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace flexplan

#endif  // FLEXPLAN_CLI_H_

#ifndef CAPSTAN_CLI_HPP_
#define CAPSTAN_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace capstan {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,       // usage, parse or input errors
  kExitInfeasible = 2,  // no plan / no solution
  kExitDomain = 3,      // numeric or geometric domain errors
};

/// Runs the `capstan_cli` tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace capstan

#endif  // CAPSTAN_CLI_HPP_

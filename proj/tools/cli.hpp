#ifndef VPCRO_TOOLS_CLI_HPP
#define VPCRO_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace vpcro::cli {

enum ExitCode : int {
  kSuccess = 0,
  kError = 1,
  kNoRoute = 2,
  kUsage = 64,
};

/// Runs one `vpcro` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vpcro::cli

#endif  // VPCRO_TOOLS_CLI_HPP

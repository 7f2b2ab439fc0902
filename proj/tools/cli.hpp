#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sylkit/errors.hpp"

namespace sylkit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitMaxIterations = 2,
  kExitUsage = 64,
  kExitData = 65,
  kExitInternal = 70,
};

int exit_code_for(ErrorCode code) noexcept;

using ConfigMap = std::map<std::string, std::string>;

/// Flat key=value lines; '#' starts a comment. Unknown keys and lines without
/// '=' throw InvalidConfig naming the line.
ConfigMap parse_config(std::istream& is);

/// Keys accepted by `solve`, both in config files and as --key flags.
const std::vector<std::string>& config_keys();

/// Entry point shared by the executable and the tests. argv[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sylkit::cli

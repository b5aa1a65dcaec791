#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wavelab::cli {

/// Parses the arguments (program name excluded), runs the subcommand and
/// returns the process exit code: 0 success, 1 numerical failure or failed
/// check, 2 usage or validation error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wavelab::cli

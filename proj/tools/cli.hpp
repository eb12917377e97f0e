#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lensremap::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,    // bad arguments, unreadable or invalid input
  kRuntime = 3,  // evaluation failure (degenerate map, buffer error, write error)
};

/// Runs the command line tool. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lensremap::cli

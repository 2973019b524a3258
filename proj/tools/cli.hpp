#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vlmc::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kFormat = 2 };

/// Runs one command. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vlmc::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gpsol::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotConverged = 2 };

/// Runs the command line (args excludes the program name). Summary lines go to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gpsol::cli

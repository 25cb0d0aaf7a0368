#pragma once
// Subcommand dispatch for the qlll command-line tool.

#include <iosfwd>
#include <string>
#include <vector>

namespace qlll::cli {

enum ExitCode : int { ok = 0, error = 1, failed = 2 };

// `args` excludes the program name. Results go to `out` (or --output),
// diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlll::cli

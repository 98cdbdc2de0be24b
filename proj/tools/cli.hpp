#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace benfordscan::cli {

/// Runs the command line `args` (without the program name). Data goes to
/// files under --out-dir; diagnostics to `err`; --help, --version and
/// --print-config to `out`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace benfordscan::cli

#ifndef LIESYM_TOOLS_CLI_HPP
#define LIESYM_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace liesym::cli {

enum Exit { ok = 0, usage = 1, math = 2, tolerance = 3 };

/// args excludes the program name.  Writes the report to `out` (or to --out),
/// diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liesym::cli

#endif  // LIESYM_TOOLS_CLI_HPP

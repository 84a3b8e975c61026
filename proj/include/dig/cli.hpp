#ifndef DIG_CLI_HPP
#define DIG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dig {

/// Full command-line driver, callable in-process for testing.  `args`
/// excludes the program name.  Returns the process exit code; every
/// failure writes a single `error: ...` line to `err` and returns
/// nonzero.
int dig_cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dig

#endif  // DIG_CLI_HPP

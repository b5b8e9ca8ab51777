#ifndef IDIM_CLI_HPP
#define IDIM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace idim {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_resource = 3, exit_invariant = 4 };

// args excludes the program name. Results go to out (or out= files),
// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string usage_text();

} // namespace idim

#endif // IDIM_CLI_HPP

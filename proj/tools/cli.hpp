// cli.hpp -- the dvn command table, runnable in-process.

#ifndef DVN_TOOLS_CLI_HPP_
#define DVN_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace dvn {

constexpr int exit_ok = 0;
constexpr int exit_domain = 1;
constexpr int exit_usage = 2;

/// args excludes the program name.  Returns the exit code.
int run_cli(std::vector<std::string> const& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace dvn

#endif  // DVN_TOOLS_CLI_HPP_

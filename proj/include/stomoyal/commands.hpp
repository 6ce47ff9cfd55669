#ifndef STOMOYAL_COMMANDS_HPP
#define STOMOYAL_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace stomoyal {

// Full CLI entry point (everything after argv[0]). Writes results to `out`
// and diagnostics to `err`. Exit codes: 0 success, 1 verification failure,
// 2 usage or document errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace stomoyal

#endif

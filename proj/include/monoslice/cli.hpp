#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace monoslice {

/// Entry point shared by `monoslice` and `monoslice-run`. Returns the process
/// exit code: 0 success, 1 runtime fault, 2 usage/parse/resolve/config error.
/// With `implied_command` set, it is inserted as the subcommand.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err,
            const std::string& implied_command = {});

}  // namespace monoslice

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prodline {

/// Exit codes shared by every subcommand.
enum ExitCode {
    kExitOk = 0,
    kExitValidation = 2,
    kExitVerification = 3,
    kExitOracleGap = 4,
    kExitIo = 5,
};

/// Runs the command-line tool on the given arguments (without argv[0]).
/// All output goes to the provided streams; exceptions are mapped to the
/// exit codes above.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prodline

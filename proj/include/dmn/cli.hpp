#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmn::cli {

enum ExitCode : int {
    kSuccess = 0,
    kComputationError = 1,
    kUsageError = 2,
};

/// Runs the `dmn` command line (`loglik`, `fit`, `bench accuracy|runtime`).
/// `args` excludes the program name. Results go to `out` unless --out is
/// given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmn::cli

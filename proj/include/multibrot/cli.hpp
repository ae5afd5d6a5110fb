#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace multibrot::cli {

/// Exit codes: 0 success, 1 invariant violation or failed verification,
/// 2 bad input or numerical failure.
int run(int argc, char** argv);

/// `args` excludes the program name. Machine-readable output goes to `out`,
/// diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multibrot::cli

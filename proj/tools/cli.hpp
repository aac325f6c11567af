#pragma once

#include <iosfwd>

namespace ccl::cli {

enum ExitCode { kOk = 0, kInputError = 1, kInternalError = 2 };

/// Runs the command line; output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ccl::cli

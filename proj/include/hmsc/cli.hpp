#pragma once

namespace hmsc {

/// Full command-line front end. Returns the process exit code:
/// 0 success, 1 usage error, 2 processing error.
int run_cli(int argc, const char* const* argv);

}  // namespace hmsc

#pragma once

namespace monotile::cli {

// Full command-line entry point.  Returns the process exit code:
// 0 success, 1 verification/runtime failure, 2 usage or input errors.
int run(int argc, const char* const* argv);

}  // namespace monotile::cli

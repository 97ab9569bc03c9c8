#pragma once

namespace stablefair {

// Command-line entry point (train / evaluate / sweep / certify). Returns the
// process exit code: 0 success, 1 configuration error, 2 data error,
// 3 solver non-convergence.
int run_cli(int argc, const char* const* argv);

}  // namespace stablefair

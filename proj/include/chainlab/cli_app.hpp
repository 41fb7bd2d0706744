#pragma once

// Command line entry point, kept out of main() so tests can drive it.
// Exit codes: 0 success, 1 bad input, 2 at least one violated check,
// 3 a computation failed to converge.

namespace chainlab {

int run_cli(int argc, const char* const* argv);

}  // namespace chainlab

#pragma once

namespace vendirl {

/// Entry point for the vendirl CLI (subcommands: train, eval, plot, score).
/// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
int run_cli(int argc, const char* const* argv);

}  // namespace vendirl

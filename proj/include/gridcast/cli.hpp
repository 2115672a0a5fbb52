#pragma once

namespace gridcast {

/// Parses and runs one command.  Returns the process exit code:
/// 0 success, 2 bad input or usage, 3 model or solve failure,
/// 4 broken internal invariant.
int run_cli(int argc, const char* const* argv);

}  // namespace gridcast

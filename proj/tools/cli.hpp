#pragma once

#include <iosfwd>

namespace majorant::cli {

/// Runs `majorantlab` with the given arguments. Returns the exit code:
/// 0 when every asserted invariant held, 1 on an invariant failure and 2 on
/// a usage, parse or domain error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace majorant::cli

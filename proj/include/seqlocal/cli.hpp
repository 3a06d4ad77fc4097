#pragma once

#include <ostream>

namespace seqlocal {

/// Entry point of the seqlocal command-line tool. JSON goes to `out`, diagnostics to `err`.
/// Returns 0 on success (or a positive verdict), 1 for a negative verdict, 2 for bad input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seqlocal

#pragma once

#include <iosfwd>

namespace amalgam {

/// Entry point of the `amalgam` tool. Returns 0 when every certificate
/// passes, 1 on a certificate failure and 2 on an input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace amalgam

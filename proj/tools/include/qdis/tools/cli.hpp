#pragma once

#include <iosfwd>

namespace qdis::tools {

/// Entry point of the qdis binary; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdis::tools

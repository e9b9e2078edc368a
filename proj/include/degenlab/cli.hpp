#ifndef DEGENLAB_CLI_HPP
#define DEGENLAB_CLI_HPP

#include <iosfwd>

namespace dgl {

/// Entry point of the degenlab tool: verify, solve, study. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace dgl

#endif

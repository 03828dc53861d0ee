#ifndef RWB_CLI_HPP
#define RWB_CLI_HPP

// The command-line surface: classify sets, check endpoint-closure flags,
// decompose, build reductions, verify them on grids, bridge to sequence
// space, and export maps — all with deterministic line-oriented output.

#include <iosfwd>
#include <string>
#include <vector>

namespace rwb {

// Runs one command (argv without the program name) writing the report to
// `out` and one-line diagnostics to `err`. Exit codes: 0 ok / verification
// pass, 1 verification failure, 2 usage or parse error, 3 certificate
// depth exhausted.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rwb

#endif

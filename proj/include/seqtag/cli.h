#ifndef SEQTAG_CLI_H_
#define SEQTAG_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace seqtag {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitEvalMismatch = 2;
inline constexpr int kExitViolations = 3;

// Runs one subcommand. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqtag

#endif  // SEQTAG_CLI_H_

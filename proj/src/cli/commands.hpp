#ifndef HBI_CLI_COMMANDS_HPP
#define HBI_CLI_COMMANDS_HPP

#include <stdexcept>
#include <string>

#include "cli/job.hpp"

namespace hbi::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kSchemaError = 2,
  kStrongSingular = 3,
  kTruncationOverflow = 4,
  kCompareFailed = 5,
};

// Error raised while evaluating a job, tagged with the exit code to report.
class CommandError : public std::runtime_error {
 public:
  CommandError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

struct CommandResult {
  std::string output;
  ExitCode code = kOk;
};

CommandResult run_compute(const Job& job, int threads = 1);
CommandResult run_compare(const Job& job, int threads = 1);
CommandResult run_convergence(const Job& job, int threads = 1);

/// Loads the job, runs `command` and maps every failure to its exit code,
/// writing diagnostics to `err`.
int dispatch(const std::string& command, const std::string& job_path, const std::string& out_path,
             int threads, std::uint64_t seed, std::ostream& out, std::ostream& err);

}  // namespace hbi::cli

#endif  // HBI_CLI_COMMANDS_HPP

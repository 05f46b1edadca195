#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbc::cli {

enum class Subcommand { Sweep, Analyze, Calibrate, SafetyCheck, Help };

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitSafety = 3,
};

struct CommandPlan {
  Subcommand subcommand = Subcommand::Help;
  std::string config;
  std::string out;
  std::string classical;
  std::string wireless;
  std::string report;
  std::optional<std::string> svg;
  std::string measured;
  std::optional<std::uint64_t> seed;
  std::optional<int> budget;
  double tx_dbm = 0.0;
  /// Usage text for Help plans.
  std::string help;
};

/// Thrown for invalid command lines; the message names the offending flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses `args` (without the program name).
CommandPlan parse_args(const std::vector<std::string>& args);

/// Sweep worker cap from HBC_CHANSIM_THREADS; 0 means library default.
unsigned threads_from_env();

int execute(const CommandPlan& plan, std::ostream& out, std::ostream& err);

/// parse_args + execute with exit-code mapping; what main() calls.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hbc::cli

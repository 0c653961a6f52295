#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>

#include "rydsim/protocols.h"

namespace rydsim {

enum class OutputFormat { kText, kJson };

/// Stable process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitThreshold = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

/// Everything one command-line invocation depends on. After
/// apply_defaults() every field is set, and echo() copies it into the report.
struct RunConfig {
  std::string command;
  std::string target;
  std::int64_t atoms = 1000000;
  std::optional<int> tracked_cap;
  BlockadeMode blockade = BlockadeMode::kHard;
  double v_over_omega = 1000.0;
  std::uint64_t seed = 1;
  /// Optimizer restarts; unset means the problem's own default.
  std::optional<int> restarts;
  std::string out_dir;
  std::optional<double> threshold;
  OutputFormat format = OutputFormat::kText;
  int verbosity = 0;

  /// Fills the threshold from default_threshold() and validates. Throws ConfigError.
  void apply_defaults();
  ProtocolConfig protocol() const;
  /// Adds "config.*" notes with every field.
  void echo(ExperimentReport &report) const;
};

/// Pass thresholds that mirror the acceptance targets:
///   prep        fidelity >= 1 - 1e-6 (hard) or 1 - 1e-3 (soft)
///   braid       probability of the expected readout >= 1 - 1e-4
///   spinon      probability of the expected outcome >= 1 - 1e-10
///   optimize    three_segment: fidelity >= 1 - 1e-8; two_pulse: |F - 0.7337| <= 1e-3
///   takagi      congruence residual <= 1e-9
///   scan        phase deviation <= 1e-8 (also optimize scan)
///   replay      deviation <= 1e-12
double default_threshold(const std::string &command, const std::string &target, BlockadeMode blockade);

/// Maps library exceptions onto exit codes: ConfigError and ParseError are
/// usage errors, NumericalError and DomainError numerical ones.
int exit_code_for(const std::exception &e);
std::string_view error_kind(const std::exception &e);

/// Machine-readable failure block, printed on stderr by the tool:
///   [error]
///   kind = parse
///   exit_code = 2
///   message = line 3, column 5: ...
std::string error_block(const std::exception &e);

std::string_view format_name(OutputFormat f);
/// Throws ConfigError for anything other than "text" or "json".
OutputFormat parse_format(const std::string &name);
/// Throws ConfigError for anything other than "hard" or "soft".
BlockadeMode parse_blockade(const std::string &name);

}  // namespace rydsim

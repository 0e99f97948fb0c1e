#pragma once

// Runs an external HOL prover on THF files and reads its SZS status line.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dtf {

enum class SzsStatus { Theorem, CounterSatisfiable, Unsatisfiable, Satisfiable, Timeout, GaveUp, Error, Unknown };

std::string_view szs_name(SzsStatus s);
std::optional<SzsStatus> szs_from_name(std::string_view word);

struct ProverConfig {
  /// Shell command; {file} (exactly once) is replaced by the quoted path,
  /// {timeout} by the timeout in whole seconds.
  std::string command_template;
  double timeout = 60.0;
  int max_parallel = 1;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;

  /// Value of DTF_PROVER, if set and non-empty.
  static std::optional<std::string> default_template();
};

struct SzsVerdict {
  SzsStatus status = SzsStatus::Unknown;
  std::string raw_line;
  double wall_time = 0.0;
  int exit_code = -1;
  /// Set for Error and Timeout verdicts not taken from the prover output.
  std::string diagnostic;
};

/// Reads the `% SZS status <Word>` lines of `output`: the first one wins,
/// a later line with a different status makes the verdict Error, no line
/// means Unknown. Other text is ignored.
SzsVerdict parse_szs(std::string_view output);

/// Builds the command line for `file`.
std::string render_command(const ProverConfig& cfg, const std::filesystem::path& file);

/// Runs the prover in its own process group and kills the group when the
/// timeout expires or the prover exits.
SzsVerdict run_prover(const ProverConfig& cfg, const std::filesystem::path& thf_file);

/// Runs all files with at most cfg.max_parallel provers at a time.
std::map<std::filesystem::path, SzsVerdict> discharge_all(const ProverConfig& cfg,
                                                         const std::vector<std::filesystem::path>& files);

/// True iff every verdict is Theorem (so true for an empty map).
bool all_theorem(const std::map<std::filesystem::path, SzsVerdict>& verdicts);

}  // namespace dtf

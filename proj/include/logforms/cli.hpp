#pragma once

// Command-line configuration, dispatch and report serialization.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "logforms/asymptotics.hpp"
#include "logforms/census.hpp"
#include "logforms/conditions.hpp"
#include "logforms/core.hpp"

namespace logforms::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { census, e_set, lemmas, asymptotic, verify_theorem, converge };
enum class Format { json, csv };

std::string_view to_string(Command c);

/// Malformed command line; carries the offending flag in its message.
class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct RunConfig {
  Command command = Command::census;
  std::optional<Bounds> bounds;          ///< absent only for converge with equal/separated shape
  std::optional<double> C_override;
  std::optional<FilterParameter> param;  ///< effective cutoff for e-set, lemmas, verify-theorem
  std::uint64_t budget = kDefaultBudget;
  std::optional<std::string> output_path;
  Format format = Format::json;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::vector<std::int64_t> scales;
  Shape shape = Shape::equal;
  std::size_t n = 1;
  Sentinel sentinel = Sentinel::one;
};

/// args[0] is the program name. Throws UsageError (or ConfigError for
/// bounds and cutoff problems) on invalid input.
RunConfig parse_args(const std::vector<std::string>& args);

struct RunResult {
  int exit_code = 0;  ///< 0 ok, 1 violation found, 2 resource/usage error
  std::string report;
  std::string error;
};

/// Runs the experiment and serializes its report. Does not write files.
RunResult run(const RunConfig& config);

/// Full CLI entry: parse, run, write the report to --out or `out`,
/// diagnostics to `err`. Returns the process exit status.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Formats v with 12 significant digits ("" for non-finite values).
std::string format_number(double v);

}  // namespace logforms::cli

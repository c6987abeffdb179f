#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace detphase::cli {

enum class Command { spectrum, det_sign, winding, sweep, hodge, verify };

enum ExitCode : int { kPass = 0, kAssertion = 1, kUsage = 2, kNumerical = 3 };

struct RunConfig {
  Command command = Command::verify;
  /// Path to a spec file or an inline JSON document.
  std::string spec;
  int cutoff = 64;
  int steps = 4096;
  double axis_tolerance = 1e-6;
  double pairing_tolerance = 1e-8;
  /// Output directory for artifacts; empty writes the primary artifact to stdout.
  std::string out;
  int jobs = 1;

  // winding
  std::string samples;
  double beta = 1.0;
  // sweep
  int sweep_steps = 20;
  // hodge
  int dimension = 3;
  std::string hodge_op = "summary";
  double a = 0.5;
  std::vector<double> coeffs;
  // verify
  std::vector<int> only;
};

inline constexpr int kMaxCutoff = 1024;

/// Parses argv into a config.  On --help or a usage error, writes to `out`
/// or `err` and returns the exit code to use instead.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code);

/// Runs one command.  Reports go to `out`; structured failure records
/// (one JSON object per line) go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace detphase::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace neretin {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
/// Ran to completion but a requested check failed or no verdict was reached.
inline constexpr int kExitNegative = 2;

enum class OutputFormat { Json, Csv, Text };

struct RunConfig {
  int d = 2;
  std::optional<int> n;
  int n_max = 3;
  std::size_t word_length = 6;
  double c = 10;
  /// Defaults to 1/(2 d^2).
  std::optional<double> alpha;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::string> out;

  double alpha_or_default() const { return alpha ? *alpha : 0.5 / (d * d); }
  /// Throws ValidationError on out-of-range values.
  void validate() const;
};

/// Runs the command line (without the program name); returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Deterministic self-test report for the given seed; `passed` reports the overall result.
std::string selftest_report(std::uint64_t seed, OutputFormat format, bool& passed);

}  // namespace neretin

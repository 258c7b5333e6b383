#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "cat5/io.hpp"

namespace cat5::cli {

enum class Subcommand { Check, Embed, Classify, Gamma, Verify, Hunt };

inline constexpr int kExitHolds = 0;
inline constexpr int kExitFails = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitUndecided = 3;

struct RunConfig {
  Subcommand command = Subcommand::Check;
  std::optional<std::filesystem::path> input;
  std::optional<std::string> inline_matrix;  // rows separated by ';', entries by ','
  std::optional<io::InputFormat> format;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> complex;  // verify: complex JSON to re-check
  std::optional<std::string> graph;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  double tol_compare = kDefaultCompareTol;
  double tol_zero = kDefaultZeroTol;
  int resolution = 8;
  unsigned workers = 1;
};

struct RunResult {
  int exit_code = kExitError;
  std::string output;   // JSON artifact
  std::string message;  // one-line human summary for stderr
};

/// Throws nothing: library errors map to exit code 2 with a JSON error body.
RunResult dispatch(const RunConfig& cfg);

/// Sets the log level from CAT5_LOG (trace, debug, info, warn, error, off).
void configure_logging();

}  // namespace cat5::cli

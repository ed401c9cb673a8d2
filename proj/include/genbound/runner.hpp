#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace genbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitViolation = 4;

struct RunOptions {
  std::string subcommand;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> format;
  std::optional<std::string> out_path;
  bool no_timestamp = false;
};

// Executes one subcommand against a config file, writes the report to the
// configured path (or `out` when none), and returns the process exit code:
// 0 all checks satisfied, 2 config error, 3 capacity error, 4 bound
// violation, 1 anything else.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace genbound::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace phasereg::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternal = 1,
  kUsage = 2,
  kValidation = 3,
  kIo = 4,
};

struct RunConfig {
  std::string subcommand;
  std::string scenario;
  std::optional<std::size_t> n;
  std::optional<double> tau;
  std::optional<double> sigma;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::size_t grid = 4097;
  std::size_t threads = 0;
  std::size_t replicates = 20;
  std::string cells;
  std::filesystem::path out = ".";
  std::filesystem::path input;
  std::filesystem::path truth;
};

/// Parses arguments and runs one subcommand. Messages go to `out`/`err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Executes an already-parsed configuration. Throws on failure.
void execute(const RunConfig& config, std::ostream& out);

}  // namespace phasereg::cli

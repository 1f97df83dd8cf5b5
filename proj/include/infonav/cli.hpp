#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace infonav::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNotConverged = 2;
inline constexpr int kInternalError = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "INFONAV_OUT_DIR";

struct RunConfig {
  std::filesystem::path input;
  /// tsv, csv or openflights.
  std::string format = "tsv";
  std::optional<std::filesystem::path> capacity;
  std::vector<std::string> targets;
  std::vector<double> gammas;
  /// Gammas were given in bits; multiply by ln 2 before solving.
  bool gamma_in_bits = false;
  double tol = 1e-12;
  std::optional<long> max_iter;
  std::uint64_t seed = 1;
  std::filesystem::path out;
  std::set<std::string> exports{"json", "csv"};
  double beta = 1.0;
  /// Monte-Carlo validation walkers per source; 0 disables it.
  long mc_walkers = 0;
  long mc_step_cap = 1000000;
  /// compare: prepend a gamma = 0 row.
  bool baseline = false;

  /// Throws InputError unless there is at least one target and one gamma
  /// and tol > 0.
  void validate() const;
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infonav::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twoslit/design.hpp"
#include "twoslit/geometry.hpp"
#include "twoslit/hypothesis.hpp"
#include "twoslit/montecarlo.hpp"

namespace twoslit::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kFeasibilityFailure = 2,
  kNoFeasiblePoint = 3,
};

/// Malformed or inconsistent configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Apparatus apparatus;
  ScanConfig scan;
  OutcomeHypothesis hypothesis;
  SearchSpace search;
  std::size_t search_samples{200};
  std::uint64_t search_seed{1};
  double validate_x_max{0.0};  ///< scan extent for the mis-detection sweep
  std::filesystem::path out_dir{"."};
  bool timestamp{true};
};

/// Builds a run configuration from a JSON document with top-level keys `apparatus`, `scan`,
/// `hypothesis` and `search`. Lengths in meters, angles in radians. Throws ConfigError.
RunConfig parse_config(std::string_view json_text);

/// Paper design, 41 positions over [-3 F_s, 3 F_s], 10^4 photons per position, seed 42.
RunConfig default_config();

int cmd_validate(const RunConfig& config, std::ostream& log);
int cmd_scan(const RunConfig& config, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_search(const RunConfig& config, std::ostream& log);

/// Entry point: `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twoslit::cli

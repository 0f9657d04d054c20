#pragma once

#include "semilab/spaces.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace semilab::cli {

inline constexpr const char* kOutputDirEnv = "SEMILAB_OUT";

struct RunConfig {
  std::string command;   // verify | spectrum | trajectory
  std::string scenario;  // verify only: example | isometric | shift | l1 | hilbert
  Index dim = 64;
  std::vector<Index> dims{8, 32, 128};
  std::optional<Real> grid_start;  // unset: per-scenario default grid
  Real grid_stop = 0;
  Real grid_step = 0;
  std::vector<Real> omega;
  std::vector<Real> lambda{2.0, 1.0};
  std::vector<Real> mu{0.0, 0.5};
  std::uint64_t seed = 42;
  int trials = 1000;
  Index k = 1;                  // one-based basis index for `trajectory`
  std::string input = "phase";  // phase | paper, for `verify isometric` and `trajectory`
  ToleranceConfig tolerances;
  std::filesystem::path output_dir = ".";
  std::set<std::string> formats{"json", "csv"};

  /// Throws InvalidGrid / InvalidArgument / UnknownScenario.
  void validate() const;
};

/// Settings as key -> raw text, in the flat `key = value` file format.
using Settings = std::map<std::string, std::string>;

Settings parse_settings_file(const std::filesystem::path& path);

/// Applies raw settings on top of `config`.
void apply_settings(RunConfig& config, const Settings& settings);

/// Runs one command. Exit status: 0 all assertions passed, 1 an assertion
/// failed, 2 configuration or input error.
int run(const RunConfig& config, std::ostream& log);

/// Full command line entry point (parsing, config file, env, run).
int main_entry(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

}  // namespace semilab::cli

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "genrob/config.hpp"

namespace genrob {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitProperty = 4,
};

/// Output of one command: file name -> contents, plus the exit code.
/// Files are only written once the command has completed.
struct CommandOutput {
  int exit_code = kExitOk;
  std::vector<std::pair<std::string, std::string>> files;
  std::string message;
};

CommandOutput simulate_command(const Config& cfg);
CommandOutput consistency_command(const Config& cfg);
CommandOutput certify_command(const Config& cfg);
CommandOutput verify_command(const Config& cfg);

struct PropertyCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;      // largest observed residual
  double tolerance = 0.0;
  std::size_t samples = 0;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool passed() const;
  const PropertyCheck* find(const std::string& name) const;
};

/// Skew-symmetry, regressor, flow-block norm, S/T factorization, energy
/// decomposition and Euler-Lagrange checks on the configured system.
PropertyReport run_property_suite(const Config& cfg);

/// Loads the config, applies the seed override, runs the named command and
/// writes its files into out_dir. Errors are reported on `err` and mapped
/// to exit codes (2 config, 3 numeric, 4 property suite).
int run_command(const std::string& name, const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err);

/// %.17g formatting used by every emitted number.
std::string format_number(double v);

}  // namespace genrob

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genrob/bodies.hpp"
#include "genrob/errors.hpp"
#include "genrob/kinematics.hpp"
#include "genrob/simulator.hpp"

namespace genrob {

/// Schema violation, located by a JSON pointer into the document.
class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& pointer, const std::string& message)
      : InvalidInput((pointer.empty() ? "/" : pointer) + ": " + message), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct SimulationConfig {
  double t0 = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  int output_every = 1;
  VecX q0;
  VecX qd0;
  TorqueSource torque;
  Signal disturbance;
};

struct CertifyConfig {
  Grid grid;
  std::vector<double> times;
  int restarts = 10;
  double epsilon = 1e-6;
};

struct ConsistencyConfig {
  std::vector<double> times;
};

struct VerifyConfig {
  int samples = 200;
  std::vector<double> times{0.0, 0.5, 1.0};      // times at which bodies are evaluated
  std::vector<double> oracle_times{0.25, 0.75};  // times for the Euler-Lagrange comparison
  double oracle_tolerance = 1e-5;
  std::string inject_fault;           // "" or "flip_h_sign"
};

struct Config {
  Chain chain;
  std::vector<BodySource> bodies;
  std::uint64_t seed = 1;
  std::optional<SimulationConfig> simulation;
  std::optional<CertifyConfig> certify;
  std::optional<ConsistencyConfig> consistency;
  std::optional<VerifyConfig> verify;
};

/// Parses and validates a JSON document. Throws ConfigError.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Scenario for the simulate command; throws ConfigError if the document
/// has no "simulation" section.
Scenario make_scenario(const Config& cfg);

/// Sample times of the consistency/certify sections, or a default grid over
/// the simulation span.
std::vector<double> consistency_times(const Config& cfg);
std::vector<double> certify_times(const Config& cfg);

}  // namespace genrob

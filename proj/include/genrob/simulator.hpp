#pragma once

#include <vector>

#include "genrob/bodies.hpp"
#include "genrob/dynamics.hpp"
#include "genrob/kinematics.hpp"

namespace genrob {

/// A vector-valued function of time: zero, constant, or a table that is
/// linearly interpolated and held constant outside its span.
struct Signal {
  enum class Kind { kZero, kConstant, kTable };
  Kind kind = Kind::kZero;
  VecX value;
  std::vector<double> times;
  std::vector<VecX> values;

  static Signal zero() { return {}; }
  static Signal constant(const VecX& v);
  static Signal table(std::vector<double> times, std::vector<VecX> values);

  VecX at(double t, Eigen::Index n) const;
  void validate(Eigen::Index n) const;
};

/// Actuation torque tau(t, q, qd).
struct TorqueSource {
  enum class Kind { kSignal, kPD, kGravity };
  Kind kind = Kind::kSignal;
  Signal signal;
  VecX setpoint, kp, kd;              // PD toward a fixed setpoint
  bool gravity_compensation = false;  // PD: add G(q, Theta(t))

  static TorqueSource from_signal(Signal s);
  static TorqueSource pd(const VecX& setpoint, const VecX& kp, const VecX& kd, bool gravity_compensation);
  /// tau = G(q, Theta(t)): holds the arm in place when rigid and at rest.
  static TorqueSource gravity();

  VecX evaluate(double t, const DynamicsTerms& terms) const;
  void validate(Eigen::Index n) const;
};

struct Scenario {
  Chain chain;
  std::vector<BodySource> bodies;
  TorqueSource torque;
  Signal disturbance;
  VecX q0;
  VecX qd0;
  double t0 = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  int output_every = 1;

  void validate() const;
  std::size_t steps() const;
};

struct SimState {
  double t = 0.0;
  VecX q;
  VecX qd;
};

/// Kinetic terms (rigid, offset, cross), potential energy and their sum.
struct EnergyAudit {
  KineticTerms kinetic;
  double potential = 0.0;
  double nu = 0.0;
  double total() const { return kinetic.total() + potential; }
};

struct Sample {
  double t = 0.0;
  VecX q;
  VecX qd;
  VecX qdd;
  EnergyAudit energy;
  double flow_work = 0.0;  // accumulated integral of qd^T J^T Q Psi-dot
};

struct Trajectory {
  std::vector<Sample> samples;
  std::size_t steps = 0;
  double max_energy_drift = 0.0;  // max |E(t) - E(t0)| over all steps
};

/// Right-hand side (qd, qdd) of the first-order system at (t, q, qd).
VecX accelerations(const Scenario& sc, const SimState& s);

/// One classical fourth-order Runge-Kutta step. Body states are evaluated at
/// every stage time.
SimState step(const Scenario& sc, const SimState& s, double dt);

EnergyAudit energy(const Scenario& sc, const SimState& s);

/// Integrates from t0 to t_end. Throws SingularMassMatrix, with the time and
/// state appended to the message, if the mass matrix degenerates.
Trajectory run(const Scenario& sc);

}  // namespace genrob

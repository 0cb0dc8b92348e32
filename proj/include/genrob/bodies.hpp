#pragma once

#include <variant>
#include <vector>

#include "genrob/inertial.hpp"
#include "genrob/particles.hpp"

namespace genrob {

/// Rigid shape whose mass follows a time law: Phi(t) = m(t) * Phi_unit,
/// where Phi_unit describes the same shape with unit mass.
struct ScaledInertia {
  InertialParams unit;
  TimeLaw mass = TimeLaw::constant(1.0);
};

/// Where one body's inertial data comes from.
using BodySource = std::variant<ParticleCloud, ParamTrajectory, ScaledInertia>;

BodySource constant_body(const InertialParams& p);

/// Everything the dynamics needs from one body at one instant.
struct BodyState {
  InertialParams phi;
  InertialParams phi_rate;
  Vec12 psi = Vec12::Zero();
  Vec12 psi_rate = Vec12::Zero();
  double nu = 0.0;
};

BodyState evaluate_body(const BodySource& src, double t);

/// Stacked flow quantities of all bodies: Psi, Psi-dot (12N each) and nu.
struct FlowState {
  VecX psi;
  VecX psi_rate;
  double nu = 0.0;

  static FlowState zero(int bodies);
};

/// Theta(t), Theta-dot(t) and the flow state of the whole chain.
struct SystemState {
  std::vector<InertialParams> theta;
  std::vector<InertialParams> theta_rate;
  FlowState flow;
};

SystemState evaluate_bodies(const std::vector<BodySource>& sources, double t);

/// Parameter trajectory of one body sampled at the given times (rates included).
ParamTrajectory sample_trajectory(const BodySource& src, const std::vector<double>& times);

}  // namespace genrob

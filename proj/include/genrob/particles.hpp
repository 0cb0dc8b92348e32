#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "genrob/algebra.hpp"
#include "genrob/inertial.hpp"

namespace genrob {

using Vec12 = Eigen::Matrix<double, 12, 1>;

/// Scalar time law with closed-form first and second derivatives.
struct TimeLaw {
  enum class Kind { kConstant, kLinear, kSinusoid, kExponential };
  Kind kind = Kind::kConstant;
  double base = 0.0;       // constant value / initial value / sinusoid mean
  double rate = 0.0;       // linear slope, or exponential rate [1/s]
  double amplitude = 0.0;  // sinusoid
  double omega = 0.0;      // sinusoid [rad/s]
  double phase = 0.0;      // sinusoid [rad]

  static TimeLaw constant(double v) { return {Kind::kConstant, v}; }
  static TimeLaw linear(double v0, double slope) { return {Kind::kLinear, v0, slope}; }
  static TimeLaw sinusoid(double mean, double amp, double omega, double phase = 0.0) {
    return {Kind::kSinusoid, mean, 0.0, amp, omega, phase};
  }
  static TimeLaw exponential(double v0, double rate) { return {Kind::kExponential, v0, rate}; }

  double value(double t) const;
  double rate_at(double t) const;
  double accel(double t) const;
};

/// Displacement d(t) of a particle's mobile portion relative to its body
/// frame, with d(0) = 0. The relative velocity is d'(t). The acceleration
/// callback may be left empty; then flow_rate cannot be evaluated.
struct RelativeMotion {
  std::function<Vec3(double)> displacement;
  std::function<Vec3(double)> velocity;
  std::function<Vec3(double)> acceleration;

  static RelativeMotion still();
  static RelativeMotion constant_velocity(const Vec3& v);
  /// d(t) = A (sin(w t + p) - sin p).
  static RelativeMotion oscillation(const Vec3& amplitude, double omega, double phase = 0.0);

  bool is_still() const { return !displacement; }
};

/// One lumped mass-carrying particle of a body. Its position evolves as
/// x(t) = x0 + sigma * d(t); the mobile fraction sigma moves with d'(t).
struct Particle {
  Vec3 position = Vec3::Zero();  // x0, body frame [m]
  TimeLaw mass = TimeLaw::constant(0.0);  // w(t) [kg]
  double mobility = 0.0;         // sigma in [0, 1]
  RelativeMotion motion;

  Vec3 position_at(double t) const;
  Vec3 velocity_at(double t) const;
  Vec3 acceleration_at(double t) const;  // throws InvalidInput if not supplied
};

/// Weighted particles realizing one body's time-varying mass distribution.
class ParticleCloud {
 public:
  ParticleCloud() = default;
  explicit ParticleCloud(std::vector<Particle> particles);

  const std::vector<Particle>& particles() const { return particles_; }
  bool empty() const { return particles_.empty(); }
  /// True when no particle moves and no weight changes.
  bool is_rigid() const;

 private:
  std::vector<Particle> particles_;
};

/// m = sum w, h = sum w x, I = sum w skew(x)^T skew(x). Throws if sum w <= 0.
InertialParams cloud_inertial_params(const ParticleCloud& c, double t);

/// Exact time derivative of cloud_inertial_params under x' = sigma v_rel.
InertialParams cloud_param_rate(const ParticleCloud& c, double t);

/// psi = sum w sigma [v_rel; A31(x) v_rel].
Vec12 flow_vector(const ParticleCloud& c, double t);

/// Exact time derivative of flow_vector.
Vec12 flow_rate(const ParticleCloud& c, double t);

/// nu = sum w sigma |v_rel|^2.
double kinetic_offset(const ParticleCloud& c, double t);

/// Uniform thin rod from a to b realized by `count` equal point masses at
/// segment midpoints.
ParticleCloud rod_cloud(double mass, const Vec3& a, const Vec3& b, int count);

}  // namespace genrob

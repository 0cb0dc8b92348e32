#include "genrob/particles.hpp"

#include <cmath>
#include <utility>

#include "genrob/errors.hpp"

namespace genrob {

double TimeLaw::value(double t) const {
  switch (kind) {
    case Kind::kConstant: return base;
    case Kind::kLinear: return base + rate * t;
    case Kind::kSinusoid: return base + amplitude * std::sin(omega * t + phase);
    case Kind::kExponential: return base * std::exp(rate * t);
  }
  return base;
}

double TimeLaw::rate_at(double t) const {
  switch (kind) {
    case Kind::kConstant: return 0.0;
    case Kind::kLinear: return rate;
    case Kind::kSinusoid: return amplitude * omega * std::cos(omega * t + phase);
    case Kind::kExponential: return base * rate * std::exp(rate * t);
  }
  return 0.0;
}

double TimeLaw::accel(double t) const {
  switch (kind) {
    case Kind::kConstant:
    case Kind::kLinear: return 0.0;
    case Kind::kSinusoid: return -amplitude * omega * omega * std::sin(omega * t + phase);
    case Kind::kExponential: return base * rate * rate * std::exp(rate * t);
  }
  return 0.0;
}

RelativeMotion RelativeMotion::still() { return {}; }

RelativeMotion RelativeMotion::constant_velocity(const Vec3& v) {
  RelativeMotion m;
  m.displacement = [v](double t) { return Vec3(v * t); };
  m.velocity = [v](double) { return v; };
  m.acceleration = [](double) { return Vec3(Vec3::Zero()); };
  return m;
}

RelativeMotion RelativeMotion::oscillation(const Vec3& a, double w, double p) {
  RelativeMotion m;
  m.displacement = [a, w, p](double t) { return Vec3(a * (std::sin(w * t + p) - std::sin(p))); };
  m.velocity = [a, w, p](double t) { return Vec3(a * (w * std::cos(w * t + p))); };
  m.acceleration = [a, w, p](double t) { return Vec3(a * (-w * w * std::sin(w * t + p))); };
  return m;
}

Vec3 Particle::position_at(double t) const {
  if (motion.is_still() || mobility == 0.0) return position;
  return position + mobility * motion.displacement(t);
}

Vec3 Particle::velocity_at(double t) const {
  if (!motion.velocity) return Vec3::Zero();
  return motion.velocity(t);
}

Vec3 Particle::acceleration_at(double t) const {
  if (motion.is_still()) return Vec3::Zero();
  if (!motion.acceleration) throw InvalidInput("particle relative acceleration is not supplied");
  return motion.acceleration(t);
}

ParticleCloud::ParticleCloud(std::vector<Particle> particles) : particles_(std::move(particles)) {
  for (const auto& p : particles_) {
    if (!p.position.allFinite()) throw InvalidInput("particle position is not finite");
    if (!(p.mobility >= 0.0 && p.mobility <= 1.0)) throw InvalidInput("particle mobility must lie in [0, 1]");
    if (!p.motion.is_still() && !p.motion.velocity)
      throw InvalidInput("particle motion needs a velocity law");
  }
}

bool ParticleCloud::is_rigid() const {
  for (const auto& p : particles_) {
    if (p.mass.kind != TimeLaw::Kind::kConstant) return false;
    if (!p.motion.is_still() && p.mobility > 0.0) return false;
  }
  return true;
}

namespace {

Mat3 inertia_kernel(const Vec3& x) { return skew(x).transpose() * skew(x); }

// d/dt of skew(x)^T skew(x) for x' = xd.
Mat3 inertia_kernel_rate(const Vec3& x, const Vec3& xd) {
  return skew(xd).transpose() * skew(x) + skew(x).transpose() * skew(xd);
}

Eigen::Matrix<double, 9, 1> a31(const Vec3& x, const Vec3& v) {
  // A31(x) v = (x v1; x v2; x v3)
  Eigen::Matrix<double, 9, 1> out;
  out << x * v(0), x * v(1), x * v(2);
  return out;
}

}  // namespace

InertialParams cloud_inertial_params(const ParticleCloud& c, double t) {
  InertialParams p;
  for (const auto& q : c.particles()) {
    const double w = q.mass.value(t);
    const Vec3 x = q.position_at(t);
    p.m += w;
    p.h += w * x;
    p.I += w * inertia_kernel(x);
  }
  if (!(p.m > 0.0)) throw InvalidInput("particle cloud has nonpositive total mass");
  return p;
}

InertialParams cloud_param_rate(const ParticleCloud& c, double t) {
  InertialParams r;
  for (const auto& q : c.particles()) {
    const double w = q.mass.value(t);
    const double wd = q.mass.rate_at(t);
    const Vec3 x = q.position_at(t);
    const Vec3 xd = q.mobility * q.velocity_at(t);
    r.m += wd;
    r.h += wd * x + w * xd;
    r.I += wd * inertia_kernel(x) + w * inertia_kernel_rate(x, xd);
  }
  return r;
}

Vec12 flow_vector(const ParticleCloud& c, double t) {
  Vec12 psi = Vec12::Zero();
  for (const auto& q : c.particles()) {
    if (q.motion.is_still() || q.mobility == 0.0) continue;
    const double ws = q.mass.value(t) * q.mobility;
    const Vec3 v = q.velocity_at(t);
    psi.head<3>() += ws * v;
    psi.tail<9>() += ws * a31(q.position_at(t), v);
  }
  return psi;
}

Vec12 flow_rate(const ParticleCloud& c, double t) {
  Vec12 out = Vec12::Zero();
  for (const auto& q : c.particles()) {
    if (q.motion.is_still() || q.mobility == 0.0) continue;
    const double ws = q.mass.value(t) * q.mobility;
    const double wsd = q.mass.rate_at(t) * q.mobility;
    const Vec3 x = q.position_at(t);
    const Vec3 v = q.velocity_at(t);
    const Vec3 a = q.acceleration_at(t);
    const Vec3 xd = q.mobility * v;
    out.head<3>() += wsd * v + ws * a;
    out.tail<9>() += wsd * a31(x, v) + ws * (a31(x, a) + a31(xd, v));
  }
  return out;
}

double kinetic_offset(const ParticleCloud& c, double t) {
  double nu = 0.0;
  for (const auto& q : c.particles()) {
    if (q.motion.is_still() || q.mobility == 0.0) continue;
    nu += q.mass.value(t) * q.mobility * q.velocity_at(t).squaredNorm();
  }
  return nu;
}

ParticleCloud rod_cloud(double mass, const Vec3& a, const Vec3& b, int count) {
  if (count < 1) throw InvalidInput("rod_cloud: count must be >= 1");
  std::vector<Particle> ps;
  ps.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double s = (k + 0.5) / count;
    Particle p;
    p.position = a + s * (b - a);
    p.mass = TimeLaw::constant(mass / count);
    ps.push_back(std::move(p));
  }
  return ParticleCloud(std::move(ps));
}

}  // namespace genrob

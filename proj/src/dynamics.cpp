#include "genrob/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>

#include "genrob/detail/kinematics_t.hpp"
#include "genrob/errors.hpp"

namespace genrob {

namespace {

using Mat612 = Eigen::Matrix<double, 6, 12>;

void check_theta(const Chain& chain, const Theta& theta, const char* what) {
  if (static_cast<int>(theta.size()) != chain.bodies())
    throw InvalidInput(std::string(what) + ": expected " + std::to_string(chain.bodies()) + " bodies, got " +
                       std::to_string(theta.size()));
}

void check_vec(const Chain& chain, const VecX& v, const char* what) {
  if (v.size() != chain.dof())
    throw InvalidInput(std::string(what) + ": expected " + std::to_string(chain.dof()) + " entries, got " +
                       std::to_string(v.size()));
  if (!v.allFinite()) throw InvalidInput(std::string(what) + " is not finite");
}

void check_psi(const Chain& chain, const VecX& psi) {
  if (psi.size() != 12 * chain.bodies())
    throw InvalidInput("flow vector must have 12 entries per body");
}

template <class T>
Eigen::Matrix<T, 6, 12> q_body_t(const Mat3T<T>& r) {
  static const std::pair<MatX, MatX> st = st_matrices();
  const MatXT<T> s = st.first.cast<T>();
  const MatXT<T> t = st.second.cast<T>();
  const MatXT<T> a33 = block_replicate<T>(MatXT<T>(r));
  Eigen::Matrix<T, 6, 12> out = Eigen::Matrix<T, 6, 12>::Zero();
  out.template block<3, 3>(0, 0) = r;
  out.template block<3, 9>(3, 3) = -(s * a33 * t * a33);
  return out;
}

template <class T>
T potential_t(const Chain& chain, const VecXT<T>& q, const Theta& theta) {
  VecXT<T> pose;
  std::vector<Mat3T<T>> rot;
  detail::forward_t<T>(chain, q, &pose, &rot);
  const Vec3& g = chain.gravity();
  T u(0.0);
  for (int l = 0; l < chain.bodies(); ++l) {
    const InertialParams& p = theta[static_cast<std::size_t>(l)];
    const Vec3T<T> w = Vec3T<T>(pose.template segment<3>(6 * l)) * T(p.m) +
                       rot[static_cast<std::size_t>(l)] * p.h.cast<T>();
    for (int k = 0; k < 3; ++k) u = u - g(k) * w(k);
  }
  return u;
}

template <class T>
VecXT<T> coupling_t(const Chain& chain, const VecXT<T>& q, const VecX& psi) {
  const int n = chain.dof();
  const MatXT<T> jac = detail::jacobian_t<T>(chain, q);
  std::vector<Mat3T<T>> rot;
  detail::forward_t<T>(chain, q, nullptr, &rot);
  VecXT<T> out = VecXT<T>::Zero(n);
  for (int l = 0; l < chain.bodies(); ++l) {
    const Eigen::Matrix<T, 12, 1> pl = psi.segment<12>(12 * l).cast<T>();
    const Eigen::Matrix<T, 6, 1> f = q_body_t<T>(rot[static_cast<std::size_t>(l)]) * pl;
    out += jac.block(6 * l, 0, 6, n).transpose() * f;
  }
  return out;
}

MatX mass_from(const MatX& jb, const Theta& theta) {
  return jb.transpose() * block_spatial_inertia(theta) * jb;
}

std::vector<MatX> partials_from(const BodyJacobian& bj, const Theta& theta) {
  const MatX z = block_spatial_inertia(theta);
  const MatX zjb = z * bj.jb;
  std::vector<MatX> out;
  out.reserve(bj.d_jb.size());
  for (const MatX& d : bj.d_jb) {
    const MatX a = d.transpose() * zjb;
    out.emplace_back(a + a.transpose());
  }
  return out;
}

MatX coriolis_from(const std::vector<MatX>& dm, const VecX& qd) {
  const auto n = static_cast<Eigen::Index>(dm.size());
  MatX c = MatX::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        s += 0.5 * (dm[i](k, j) + dm[j](k, i) - dm[k](i, j)) * qd(i);
      c(k, j) = s;
    }
  return c;
}

std::string format_vector(const VecX& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << "]";
  return os.str();
}

}  // namespace

VecX DynamicsTerms::generalized_force(const VecX& qdd) const {
  return M * qdd + (C + Mdot_param + H) * qd + G + flow_force();
}

MatX mass_matrix(const Chain& chain, const VecX& q, const Theta& theta) {
  check_theta(chain, theta, "mass_matrix");
  return mass_from(body_jacobian(chain, q), theta);
}

std::vector<MatX> mass_matrix_partials(const Chain& chain, const VecX& q, const Theta& theta) {
  check_theta(chain, theta, "mass_matrix_partials");
  return partials_from(body_jacobian_with_partials(chain, q), theta);
}

std::vector<MatX> christoffel(const Chain& chain, const VecX& q, const Theta& theta) {
  const std::vector<MatX> dm = mass_matrix_partials(chain, q, theta);
  const auto n = static_cast<Eigen::Index>(dm.size());
  std::vector<MatX> gamma(dm.size(), MatX::Zero(n, n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        gamma[i](j, k) = 0.5 * (dm[i](k, j) + dm[j](k, i) - dm[k](i, j));
  return gamma;
}

MatX coriolis(const Chain& chain, const VecX& q, const VecX& qd, const Theta& theta) {
  check_vec(chain, qd, "joint velocity");
  return coriolis_from(mass_matrix_partials(chain, q, theta), qd);
}

double potential_energy(const Chain& chain, const VecX& q, const Theta& theta) {
  check_theta(chain, theta, "potential_energy");
  check_vec(chain, q, "configuration");
  return potential_t<double>(chain, q, theta);
}

VecX gravity(const Chain& chain, const VecX& q, const Theta& theta) {
  check_theta(chain, theta, "gravity");
  check_vec(chain, q, "configuration");
  VecX g(chain.dof());
  for (int i = 0; i < chain.dof(); ++i)
    g(i) = potential_t<Dual<double>>(chain, detail::seed_direction(q, i), theta).d;
  return g;
}

Eigen::Matrix<double, 6, 12> q_body(const Mat3& r) { return q_body_t<double>(r); }

MatX q_block(const Chain& chain, const VecX& q) {
  const std::vector<Mat3> rot = body_rotations(chain, q);
  const int nb = chain.bodies();
  MatX out = MatX::Zero(6 * nb, 12 * nb);
  for (int l = 0; l < nb; ++l) out.block<6, 12>(6 * l, 12 * l) = q_body(rot[static_cast<std::size_t>(l)]);
  return out;
}

VecX flow_coupling(const Chain& chain, const VecX& q, const VecX& psi) {
  check_vec(chain, q, "configuration");
  check_psi(chain, psi);
  return coupling_t<double>(chain, q, psi);
}

MatX h_matrix(const Chain& chain, const VecX& q, const VecX& psi) {
  check_vec(chain, q, "configuration");
  check_psi(chain, psi);
  const int n = chain.dof();
  MatX d(n, n);
  for (int i = 0; i < n; ++i) {
    const VecXT<Dual<double>> b = coupling_t<Dual<double>>(chain, detail::seed_direction(q, i), psi);
    for (int k = 0; k < n; ++k) d(k, i) = b(k).d;
  }
  return d - d.transpose();
}

MatX param_rate_matrix(const Chain& chain, const VecX& q, const Theta& theta_rate) {
  check_theta(chain, theta_rate, "param_rate_matrix");
  return mass_from(body_jacobian(chain, q), theta_rate);
}

DynamicsTerms assemble(const Chain& chain, const VecX& q, const VecX& qd, const Theta& theta,
                       const Theta& theta_rate, const FlowState& flow) {
  check_vec(chain, q, "configuration");
  check_vec(chain, qd, "joint velocity");
  check_theta(chain, theta, "assemble");
  check_theta(chain, theta_rate, "assemble (rates)");
  check_psi(chain, flow.psi);
  check_psi(chain, flow.psi_rate);

  DynamicsTerms d;
  d.q = q;
  d.qd = qd;
  const BodyJacobian bj = body_jacobian_with_partials(chain, q);
  d.M = mass_from(bj.jb, theta);
  d.C = coriolis_from(partials_from(bj, theta), qd);
  d.G = gravity(chain, q, theta);
  d.H = flow.psi.isZero(0.0) ? MatX::Zero(chain.dof(), chain.dof()) : h_matrix(chain, q, flow.psi);
  d.Mdot_param = mass_from(bj.jb, theta_rate);
  d.Qblock = q_block(chain, q);
  d.JQ = jacobian(chain, q).transpose() * d.Qblock;
  d.psi = flow.psi;
  d.psi_rate = flow.psi_rate;
  d.nu = flow.nu;
  return d;
}

DynamicsTerms assemble(const Chain& chain, const VecX& q, const VecX& qd, const SystemState& s) {
  return assemble(chain, q, qd, s.theta, s.theta_rate, s.flow);
}

VecX forward_dynamics(const DynamicsTerms& t, const VecX& tau, const VecX& w) {
  const auto n = t.M.rows();
  if (tau.size() != n || w.size() != n) throw InvalidInput("forward_dynamics: torque/disturbance size mismatch");
  const double lmin = lambda_min(t.M);
  if (!(lmin > kMinMassEigenvalue)) {
    std::ostringstream os;
    os.precision(17);
    os << "mass matrix is not positive definite (lambda_min = " << lmin << ") at q = " << format_vector(t.q);
    throw SingularMassMatrix(os.str(), lmin);
  }
  const VecX rhs = tau + w - t.flow_force() - (t.C + t.Mdot_param + t.H) * t.qd - t.G;
  return t.M.llt().solve(rhs);
}

KineticTerms kinetic_terms(const DynamicsTerms& t) {
  KineticTerms k;
  k.rigid = 0.5 * t.qd.dot(t.M * t.qd);
  k.offset = 0.5 * t.nu;
  k.cross = t.qd.dot(t.JQ * t.psi);
  return k;
}

double particle_kinetic_energy(const Chain& chain, const std::vector<BodySource>& sources, const VecX& q,
                               const VecX& qd, double t) {
  if (static_cast<int>(sources.size()) != chain.bodies())
    throw InvalidInput("particle_kinetic_energy: body count mismatch");
  check_vec(chain, qd, "joint velocity");
  const VecX vel = jacobian(chain, q) * qd;
  const std::vector<Mat3> rot = body_rotations(chain, q);
  double energy = 0.0;
  for (int l = 0; l < chain.bodies(); ++l) {
    const Vec3 v = vel.segment<3>(6 * l);
    const Vec3 w = vel.segment<3>(6 * l + 3);
    const Mat3& r = rot[static_cast<std::size_t>(l)];
    const BodySource& src = sources[static_cast<std::size_t>(l)];
    if (const auto* cloud = std::get_if<ParticleCloud>(&src)) {
      for (const Particle& p : cloud->particles()) {
        const double m = p.mass.value(t);
        const Vec3 base = v + w.cross(r * p.position_at(t));
        const Vec3 moving = base + r * p.velocity_at(t);
        energy += 0.5 * m * ((1.0 - p.mobility) * base.squaredNorm() + p.mobility * moving.squaredNorm());
      }
    } else {
      Eigen::Matrix<double, 6, 1> vb;
      vb << r.transpose() * v, r.transpose() * w;
      energy += 0.5 * vb.dot(spatial_inertia(evaluate_body(src, t).phi) * vb);
    }
  }
  return energy;
}

Regressor regressor(const Chain& chain, const VecX& q, const VecX& qd, const VecX& v, const VecX& a) {
  check_vec(chain, qd, "joint velocity");
  check_vec(chain, v, "regressor v");
  check_vec(chain, a, "regressor a");
  const int nb = chain.bodies();
  const BodyJacobian bj = body_jacobian_with_partials(chain, q);
  Regressor r;
  r.R = MatX::Zero(chain.dof(), 10 * nb);
  Theta basis(static_cast<std::size_t>(nb));
  for (int l = 0; l < nb; ++l) {
    for (int k = 0; k < 10; ++k) {
      basis[static_cast<std::size_t>(l)] = InertialParams::from_vector(Vec10::Unit(k));
      const VecX col = mass_from(bj.jb, basis) * a + coriolis_from(partials_from(bj, basis), qd) * v +
                       gravity(chain, q, basis);
      r.R.col(10 * l + k) = col;
    }
    basis[static_cast<std::size_t>(l)] = InertialParams{};
    r.slices.emplace_back(r.R.middleCols(10 * l, 10));
  }
  return r;
}

VecX SinePath::q(double t) const {
  return q0 + amplitude.cwiseProduct((omega * t + phase).array().sin().matrix());
}

VecX SinePath::qd(double t) const {
  return amplitude.cwiseProduct(omega).cwiseProduct((omega * t + phase).array().cos().matrix());
}

VecX SinePath::qdd(double t) const {
  return -amplitude.cwiseProduct(omega).cwiseProduct(omega).cwiseProduct((omega * t + phase).array().sin().matrix());
}

namespace {

double lagrangian(const Chain& chain, const std::vector<BodySource>& sources, const VecX& q, const VecX& qd,
                  double t, KineticModel model) {
  const SystemState s = evaluate_bodies(sources, t);
  double kinetic = 0.0;
  if (model == KineticModel::kPerParticle) {
    kinetic = particle_kinetic_energy(chain, sources, q, qd, t);
  } else {
    const VecX vb = body_jacobian(chain, q) * qd;
    kinetic = 0.5 * vb.dot(block_spatial_inertia(s.theta) * vb) + 0.5 * s.flow.nu +
              qd.dot(flow_coupling(chain, q, s.flow.psi));
  }
  return kinetic - potential_energy(chain, q, s.theta);
}

VecX momentum(const Chain& chain, const std::vector<BodySource>& sources, const VecX& q, const VecX& qd, double t,
              KineticModel model, double h) {
  VecX p(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    VecX up = qd, dn = qd;
    up(i) += h;
    dn(i) -= h;
    p(i) = (lagrangian(chain, sources, q, up, t, model) - lagrangian(chain, sources, q, dn, t, model)) / (2.0 * h);
  }
  return p;
}

}  // namespace

VecX lagrangian_oracle(const Chain& chain, const std::vector<BodySource>& sources, const SinePath& path, double t,
                       KineticModel model, const OracleSteps& steps) {
  if (static_cast<int>(sources.size()) != chain.bodies()) throw InvalidInput("lagrangian_oracle: body count mismatch");
  const double tp = t + steps.dt;
  const double tm = t - steps.dt;
  const VecX dp = (momentum(chain, sources, path.q(tp), path.qd(tp), tp, model, steps.dqd) -
                   momentum(chain, sources, path.q(tm), path.qd(tm), tm, model, steps.dqd)) /
                  (2.0 * steps.dt);
  const VecX q = path.q(t);
  const VecX qd = path.qd(t);
  VecX dl(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double h = steps.dq * std::max(1.0, std::abs(q(i)));
    VecX up = q, dn = q;
    up(i) += h;
    dn(i) -= h;
    dl(i) = (lagrangian(chain, sources, up, qd, t, model) - lagrangian(chain, sources, dn, qd, t, model)) / (2.0 * h);
  }
  return dp - dl;
}

}  // namespace genrob

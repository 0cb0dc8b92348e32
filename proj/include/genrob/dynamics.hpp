#pragma once

#include <vector>

#include "genrob/bodies.hpp"
#include "genrob/inertial.hpp"
#include "genrob/kinematics.hpp"

namespace genrob {

using Theta = std::vector<InertialParams>;

/// Every term of the generalized equation of motion
///   M qdd + (C + Mdot_param + H) qd + G = tau + w - JQ * psi_rate
/// at one state.
struct DynamicsTerms {
  VecX q;
  VecX qd;
  MatX M;
  MatX C;
  VecX G;
  MatX H;
  MatX Mdot_param;  // M(q, Theta-dot)
  MatX Qblock;      // 6N x 12N
  MatX JQ;          // J^T * Qblock, n x 12N
  VecX psi;
  VecX psi_rate;
  double nu = 0.0;

  /// J^T Q Psi-dot, the forcing caused by accelerating internal flow.
  VecX flow_force() const { return JQ * psi_rate; }
  /// M qdd + (C + Mdot_param + H) qd + G + J^T Q Psi-dot; equals tau + w.
  VecX generalized_force(const VecX& qdd) const;
};

MatX mass_matrix(const Chain& chain, const VecX& q, const Theta& theta);

/// dM/dq_i for every i (exact, from dual-number body Jacobian partials).
std::vector<MatX> mass_matrix_partials(const Chain& chain, const VecX& q, const Theta& theta);

/// gamma[i](j, k) = 1/2 (d_i M_kj + d_j M_ki - d_k M_ij).
std::vector<MatX> christoffel(const Chain& chain, const VecX& q, const Theta& theta);

/// C_kj = sum_i gamma[i](j, k) qd_i.
MatX coriolis(const Chain& chain, const VecX& q, const VecX& qd, const Theta& theta);

/// Potential energy -g^T sum_l (m_l z_l + R_l h_l), with g the chain's
/// free-fall acceleration.
double potential_energy(const Chain& chain, const VecX& q, const Theta& theta);

/// dU/dq by dual numbers.
VecX gravity(const Chain& chain, const VecX& q, const Theta& theta);

/// Flow block of one body: [[R, 0], [0, -S A33(R) T A33(R)]] (6 x 12).
Eigen::Matrix<double, 6, 12> q_body(const Mat3& r);

/// blockdiag over bodies of q_body(R_l(q)).
MatX q_block(const Chain& chain, const VecX& q);

/// b = J^T Q Psi.
VecX flow_coupling(const Chain& chain, const VecX& q, const VecX& psi);

/// H = D - D^T with D = db/dq (dual numbers).
MatX h_matrix(const Chain& chain, const VecX& q, const VecX& psi);

/// M(q, Theta-dot): the mass matrix evaluated on parameter rates.
MatX param_rate_matrix(const Chain& chain, const VecX& q, const Theta& theta_rate);

DynamicsTerms assemble(const Chain& chain, const VecX& q, const VecX& qd, const Theta& theta,
                       const Theta& theta_rate, const FlowState& flow);
DynamicsTerms assemble(const Chain& chain, const VecX& q, const VecX& qd, const SystemState& s);

/// Mass matrices below this smallest eigenvalue are rejected.
inline constexpr double kMinMassEigenvalue = 1e-10;

/// Solves the equation of motion for qdd. Throws SingularMassMatrix if
/// lambda_min(M) <= kMinMassEigenvalue.
VecX forward_dynamics(const DynamicsTerms& terms, const VecX& tau, const VecX& w);

/// Kinetic energy terms 1/2 qd^T M qd, 1/2 nu and qd^T J^T Q Psi.
struct KineticTerms {
  double rigid = 0.0;
  double offset = 0.0;
  double cross = 0.0;
  double total() const { return rigid + offset + cross; }
};
KineticTerms kinetic_terms(const DynamicsTerms& terms);

/// Kinetic energy summed particle by particle from absolute velocities.
/// Bodies that are not particle clouds contribute 1/2 V_b^T Z V_b.
double particle_kinetic_energy(const Chain& chain, const std::vector<BodySource>& sources, const VecX& q,
                               const VecX& qd, double t);

/// Linear factorization M(q,Theta) a + C(q,qd,Theta) v + G(q,Theta) = R * stack(Theta).
struct Regressor {
  MatX R;                   // n x 10N
  std::vector<MatX> slices; // n x 10 per body
};
Regressor regressor(const Chain& chain, const VecX& q, const VecX& qd, const VecX& v, const VecX& a);

/// q(t) = q0 + amplitude .* sin(omega .* t + phase).
struct SinePath {
  VecX q0;
  VecX amplitude;
  VecX omega;
  VecX phase;

  VecX q(double t) const;
  VecX qd(double t) const;
  VecX qdd(double t) const;
};

enum class KineticModel {
  kLumped,       // 1/2 qd^T M qd + 1/2 nu + qd^T J^T Q Psi
  kPerParticle,  // direct sum over particle absolute velocities
};

struct OracleSteps {
  double dt = 1e-5;   // time derivative of the momentum
  double dq = 1e-6;   // position partials, scaled by max(1, |q_i|)
  double dqd = 1e-3;  // velocity partials (L is quadratic in qd)
};

/// d/dt (dL/dqd) - dL/dq along the path at time t, by central differences
/// on L = T - U. Equals DynamicsTerms::generalized_force(qdd).
VecX lagrangian_oracle(const Chain& chain, const std::vector<BodySource>& sources, const SinePath& path, double t,
                       KineticModel model = KineticModel::kLumped, const OracleSteps& steps = {});

}  // namespace genrob

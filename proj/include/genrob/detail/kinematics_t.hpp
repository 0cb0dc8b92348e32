#pragma once

// Scalar-generic forward kinematics. Instantiated with double for values,
// Dual<double> for first and Dual<Dual<double>> for second q-derivatives.

#include <vector>

#include "genrob/algebra.hpp"
#include "genrob/dual.hpp"
#include "genrob/kinematics.hpp"

namespace genrob::detail {

/// Stacked pose F(q) and/or world rotations of all bodies.
template <class T>
void forward_t(const Chain& chain, const VecXT<T>& q, VecXT<T>* pose, std::vector<Mat3T<T>>* rot) {
  const int nb = chain.bodies();
  if (pose) pose->resize(6 * nb);
  if (rot) rot->resize(static_cast<std::size_t>(nb));
  T psi(0.0);
  Vec3T<T> p = Vec3T<T>::Zero();
  for (int l = 0; l < nb; ++l) {
    const Chain::Link& link = chain.links()[static_cast<std::size_t>(l)];
    Mat3T<T> rz = rot_z(psi);
    p += rz * link.offset_c.template cast<T>();
    if (link.kind == JointKind::kRevolute) {
      psi = psi + link.sign * q(link.dof);
      rz = rot_z(psi);
    } else if (link.kind == JointKind::kPrismatic) {
      p += rz * link.axis_c.template cast<T>() * q(link.dof);
    }
    if (pose) {
      pose->template segment<3>(6 * l) = p;
      Vec3T<T> phi = link.rc_angles.template cast<T>();
      phi(2) = phi(2) + psi;
      pose->template segment<3>(6 * l + 3) = phi;
    }
    if (rot) (*rot)[static_cast<std::size_t>(l)] = rz * link.rc.template cast<T>();
  }
}

/// dF/dq evaluated with T-valued q, by one dual sweep per joint.
template <class T>
MatXT<T> jacobian_t(const Chain& chain, const VecXT<T>& q) {
  using D = Dual<T>;
  const int n = chain.dof();
  MatXT<T> jac(6 * chain.bodies(), n);
  VecXT<D> qd(n);
  VecXT<D> pose;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) qd(j) = D(q(j), j == i ? T(1.0) : T(0.0));
    forward_t<D>(chain, qd, &pose, nullptr);
    for (Eigen::Index r = 0; r < pose.size(); ++r) jac(r, i) = pose(r).d;
  }
  return jac;
}

/// blockdiag(R_l^T, R_l^T) * J: velocities in body coordinates.
template <class T>
MatXT<T> body_jacobian_t(const Chain& chain, const VecXT<T>& q) {
  const int n = chain.dof();
  MatXT<T> jac = jacobian_t<T>(chain, q);
  std::vector<Mat3T<T>> rot;
  forward_t<T>(chain, q, nullptr, &rot);
  for (int l = 0; l < chain.bodies(); ++l) {
    const Mat3T<T> rt = rot[static_cast<std::size_t>(l)].transpose();
    jac.block(6 * l, 0, 3, n) = (rt * jac.block(6 * l, 0, 3, n)).eval();
    jac.block(6 * l + 3, 0, 3, n) = (rt * jac.block(6 * l + 3, 0, 3, n)).eval();
  }
  return jac;
}

/// Seeds q with unit derivative along coordinate i.
inline VecXT<Dual<double>> seed_direction(const VecX& q, int i) {
  VecXT<Dual<double>> out(q.size());
  for (Eigen::Index j = 0; j < q.size(); ++j) out(j) = Dual<double>(q(j), j == i ? 1.0 : 0.0);
  return out;
}

}  // namespace genrob::detail

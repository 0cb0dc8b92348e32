#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "genrob/algebra.hpp"

namespace genrob {

enum class JointKind { kRevolute, kPrismatic, kFixed };

/// One joint and the body attached after it. The offset (translation, then
/// fixed rotation) leads from the previous body frame to this joint frame;
/// the joint motion follows it. `axis` is expressed in the joint frame.
/// Fixed joints attach a body without adding a degree of freedom, which is
/// how tool or tip frames are modelled.
struct Joint {
  JointKind kind = JointKind::kRevolute;
  Vec3 axis = Vec3::UnitZ();
  Vec3 offset = Vec3::Zero();         // [m]
  Mat3 offset_rotation = Mat3::Identity();
};

/// Serial chain with one body frame per joint, located at the joint.
///
/// Every revolute axis must be parallel to the world z axis in all
/// configurations. Under that restriction each body orientation is
/// Rz(psi_l(q)) * Rc_l with a constant Rc_l, so the pose angles
/// phi_l = angles(Rc_l) + (0, 0, psi_l) satisfy omega_l = d(phi_l)/dt
/// exactly. Other chains are rejected with UnsupportedChain.
class Chain {
 public:
  struct Link {
    JointKind kind;
    int dof = -1;         // column of q driving this joint, -1 if fixed
    double sign = 1.0;    // revolute: axis maps to sign * e3
    Vec3 offset_c;        // Rc_{l-1} * offset
    Vec3 axis_c;          // Rc_l * axis (prismatic direction before yaw)
    Mat3 rc;              // constant part of the orientation
    Vec3 rc_angles;       // rotation_angles(rc)
  };

  Chain(std::vector<Joint> joints, const Vec3& gravity);

  int dof() const { return dof_; }
  int bodies() const { return static_cast<int>(links_.size()); }
  const Vec3& gravity() const { return gravity_; }
  const std::vector<Joint>& joints() const { return joints_; }
  const std::vector<Link>& links() const { return links_; }
  bool has_revolute() const;

 private:
  std::vector<Joint> joints_;
  std::vector<Link> links_;
  Vec3 gravity_;
  int dof_ = 0;
};

/// Single prismatic joint along world x.
Chain prismatic_x_chain(const Vec3& gravity = Vec3::Zero());
/// Planar revolute arm about z with link lengths along x; a fixed tip frame
/// is appended at the end of the last link when `tip` is set.
Chain planar_chain(const std::vector<double>& lengths, const Vec3& gravity, bool tip = false);

/// Body positions z_l and pose angles phi_l.
struct Pose {
  std::vector<Vec3> z;
  std::vector<Vec3> phi;
  /// (z_1; phi_1; ...; z_N; phi_N).
  VecX stacked() const;
};

Pose forward_map(const Chain& chain, const VecX& q);

/// World rotation of every body frame.
std::vector<Mat3> body_rotations(const Chain& chain, const VecX& q);

/// d F / d q (6N x n); rows (v_l; omega_l) in world coordinates.
MatX jacobian(const Chain& chain, const VecX& q);

/// The same velocities expressed in the body frames: blockdiag(R_l^T) * J.
MatX body_jacobian(const Chain& chain, const VecX& q);

/// d J / d q_i for every i.
std::vector<MatX> jacobian_partials(const Chain& chain, const VecX& q);

/// Body Jacobian together with all its q-partials.
struct BodyJacobian {
  MatX jb;
  std::vector<MatX> d_jb;
};
BodyJacobian body_jacobian_with_partials(const Chain& chain, const VecX& q);

// ---------------------------------------------------------------------------
// Sampling grids and extremum scans.

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
};

/// Tensor-product grid over q. An axis with count 1 sits at its midpoint.
struct Grid {
  std::vector<GridAxis> axes;

  std::size_t size() const;
  VecX point(std::size_t k) const;
  VecX lower() const;
  VecX upper() const;
  /// Same grid stretched by `factor` about its centre.
  Grid scaled(double factor) const;
  void validate(int dof) const;
};

struct ScanOptions {
  int restarts = 10;
  std::uint64_t seed = 1;
};

/// Sampled extrema of a scalar function of q.
struct ExtremaResult {
  double inf = 0.0;
  double sup = 0.0;
  VecX argmin;
  VecX argmax;
  std::size_t evaluations = 0;
};

/// Grid sweep followed by seeded compass-search restarts inside the grid box
/// (descent for the infimum, ascent for the supremum).
ExtremaResult scan_extrema(const Grid& grid, const std::function<double(const VecX&)>& f,
                           const ScanOptions& opt = {});

struct SpectralScan {
  double inf_lambda_min = 0.0;   // inf lambda_min(J^T J)
  double sup_lambda_max = 0.0;   // sup lambda_max(J^T J) = sup sigma_max(J)^2
  VecX argmin;
  VecX argmax;
  // Largest |dJ/dq_i| over prismatic coordinates i at the sampled points.
  // J is affine in those coordinates, so any dependence means sigma_max(J)
  // is unbounded on R^n.
  double prismatic_sensitivity = 0.0;
  bool normal = false;
  bool upper_bounded = false;
  std::size_t evaluations = 0;
};

/// Normality and upper-boundedness of J over a grid (sampled certificate).
SpectralScan spectral_scan(const Chain& chain, const Grid& grid, const ScanOptions& opt = {},
                           double normal_floor = 1e-9);

}  // namespace genrob

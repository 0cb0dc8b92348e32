#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "genrob/algebra.hpp"

namespace genrob {

using Vec10 = Eigen::Matrix<double, 10, 1>;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Inertial parameters of one body: mass [kg], first moment of mass [kg m]
/// and rotational inertia about the body-frame origin [kg m^2].
struct InertialParams {
  double m = 0.0;
  Vec3 h = Vec3::Zero();
  Mat3 I = Mat3::Zero();

  /// Layout (m, h1, h2, h3, I11, I22, I33, I12, I23, I13).
  Vec10 to_vector() const;
  static InertialParams from_vector(const Eigen::Ref<const Vec10>& phi);

  InertialParams& operator+=(const InertialParams& o);
  friend InertialParams operator+(InertialParams a, const InertialParams& b) { return a += b; }
  friend InertialParams operator*(double s, InertialParams a) {
    a.m *= s;
    a.h *= s;
    a.I *= s;
    return a;
  }
};

/// Throws InvalidInput if p is non-finite or I is not symmetric to 1e-12.
void validate(const InertialParams& p);

/// Uniform solid sphere of radius r centred at c.
InertialParams sphere_params(double mass, double radius, const Vec3& center = Vec3::Zero());
/// Uniform box with edge lengths `size` centred at c, axes aligned with the body frame.
InertialParams box_params(double mass, const Vec3& size, const Vec3& center = Vec3::Zero());

/// The 4x4 pseudo-inertia [[Sigma, h], [h^T, m]] with Sigma = tr(I)/2 * I3 - I.
Mat4 pseudo_inertia(const InertialParams& p);

/// Inverse of pseudo_inertia: I = tr(Sigma) * I3 - Sigma.
InertialParams inverse_pseudo_inertia(const Mat4& p);

struct ConsistencyResult {
  bool consistent = false;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Physically consistent iff lambda_min(pseudo_inertia) > margin. Eigenvalues
/// within 1e-12 of the margin count as boundary, i.e. inconsistent.
ConsistencyResult check_consistency(const InertialParams& p, double margin = 0.0);

/// Time samples of one body's parameters, optionally with sampled rates.
struct ParamTrajectory {
  std::vector<double> times;
  std::vector<InertialParams> params;
  std::vector<InertialParams> rates;  // empty, or one per sample

  bool has_rates() const { return !rates.empty(); }
  std::size_t size() const { return times.size(); }
  /// Throws InvalidInput unless times strictly increase and samples are finite.
  void validate() const;
  /// Piecewise-linear interpolation; clamps outside the sampled span.
  InertialParams at(double t) const;
  /// Sampled rate at t (interpolated) or the slope of the interpolant.
  InertialParams rate_at(double t) const;
};

/// Trend detection on a sampled sequence of at least four values. A trend is
/// reported only when the sequence is monotone over all samples and the
/// extreme of its second half differs from that of its first half by these
/// factors. Linear growth from zero reaches a half-to-half ratio of 2 at most,
/// hence the growth factor below 2.
inline constexpr double kVanishingRatio = 0.5;
inline constexpr double kGrowthRatio = 1.5;

struct TrajectoryMargins {
  double inf_lambda_min = 0.0;
  double sup_lambda_max = 0.0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  bool consistent_at_all_samples = false;
  std::vector<std::size_t> inconsistent_samples;
  bool vanishing_trend = false;  // margin decays toward zero across samples
  bool growth_trend = false;     // lambda_max grows without settling
  bool uniformly_consistent = false;
  bool upper_bounded = false;
  std::vector<double> lambda_min;  // per sample
  std::vector<double> lambda_max;  // per sample
};

/// Sampled inf/sup of the pseudo-inertia spectrum over one body's trajectory.
/// `uniform_floor` is the smallest inf lambda_min still accepted as uniform.
TrajectoryMargins trajectory_margins(const ParamTrajectory& tr, double uniform_floor = 1e-9);

/// The 6x6 block [[m I3, -skew(h)], [-skew(h)^T, I]].
Mat6 spatial_inertia(const InertialParams& p);

/// diag(Z(Phi_1), ..., Z(Phi_N)).
MatX block_spatial_inertia(const std::vector<InertialParams>& theta);

/// Stacked parameter vector (Phi_1; ...; Phi_N) and back.
VecX stack_params(const std::vector<InertialParams>& theta);
std::vector<InertialParams> unstack_params(const VecX& theta);

}  // namespace genrob

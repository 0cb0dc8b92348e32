#pragma once

#include <string>
#include <vector>

#include "genrob/inertial.hpp"
#include "genrob/kinematics.hpp"

namespace genrob {

struct BoundOptions {
  ScanOptions scan;               // restarts and seed for the Jacobian scans
  double epsilon = 1e-6;          // alpha1 = (1 - epsilon) * product of infima
  double uniform_floor = 1e-9;    // smallest accepted inf lambda_min(f)
  double normal_floor = 1e-9;     // smallest accepted inf lambda_min(J^T J)
  double verify_tol = 1e-9;
  bool verify = true;             // evaluate M at every (grid point, sample time)
};

/// Sampled mass-matrix bounds alpha1 I <= M(q, Theta(t)) <= alpha2 I.
/// alpha1 is 0 when normality or uniform consistency fails; alpha2 is
/// +infinity when either upper-boundedness verdict fails.
struct BoundCertificate {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double jac_inf = 0.0;           // inf lambda_min(J^T J)
  double jac_sup = 0.0;           // sup sigma_max(J)^2
  double consistency_inf = 0.0;   // min over bodies of inf_t lambda_min(f)
  double consistency_sup = 0.0;   // max over bodies of sup_t lambda_max(f)
  bool normal = false;
  bool upper_bounded_jac = false;
  bool uniformly_consistent = false;
  bool params_upper_bounded = false;

  Grid grid;
  std::vector<double> times;
  SpectralScan scan;
  std::vector<TrajectoryMargins> bodies;

  // Pointwise verification of the bounds on the samples.
  std::size_t verified_points = 0;
  double sampled_min_lambda = 0.0;  // min lambda_min(M) over samples
  double sampled_max_lambda = 0.0;  // max lambda_max(M) over samples
  bool lower_holds = true;
  bool upper_holds = true;

  std::vector<std::string> notes;

  bool all_verdicts() const { return normal && upper_bounded_jac && uniformly_consistent && params_upper_bounded; }
};

/// Computes alpha1, alpha2 and all verdicts. All trajectories must share the
/// same sample times.
BoundCertificate certify(const Chain& chain, const std::vector<ParamTrajectory>& trajectories, const Grid& grid,
                         const BoundOptions& opt = {});

double lower_bound(const Chain& chain, const std::vector<ParamTrajectory>& trajectories, const Grid& grid,
                   const BoundOptions& opt = {});
double upper_bound(const Chain& chain, const std::vector<ParamTrajectory>& trajectories, const Grid& grid,
                   const BoundOptions& opt = {});

/// Upper limit on sigma_max of the flow block matrix.
inline const double kQNormLimit = 1.4142135623730951;

struct QNormReport {
  double sup = 0.0;   // sampled sup sigma_max(Q(q))
  double inf = 0.0;   // sampled inf, at least 1 because of the R block
  VecX argmax;
  std::size_t evaluations = 0;
};

/// Sampled sup of sigma_max(Q(q)); throws InternalInconsistency above
/// sqrt(2) + 1e-9.
QNormReport q_norm_check(const Chain& chain, const Grid& grid, const ScanOptions& opt = {});

struct RateBound {
  double sup_sigma = 0.0;     // sampled sup sigma_max(M(q, Theta-dot))
  double chi = 0.0;           // sampled sup sigma_max(Z(Theta-dot))
  double envelope = 0.0;      // chi * sup sigma_max(J)^2
  bool envelope_holds = true; // pointwise sigma_max(M(q,Theta-dot)) <= sigma_max(Z) sigma_max(J)^2
  double worst_slack = 0.0;   // min over samples of (pointwise envelope - sigma_max(M))
  std::size_t points = 0;
};

/// Evaluated on the grid points at every sample time.
RateBound rate_bound(const Chain& chain, const std::vector<ParamTrajectory>& trajectories, const Grid& grid);

/// Which hypotheses of the uniform-boundedness results hold on the samples,
/// and the witnesses for the constant-parameter equivalence.
struct CorollaryReport {
  bool hypotheses_hold = false;       // normal, bounded J, uniformly consistent, bounded params
  bool bounds_follow = false;         // 0 < alpha1 <= alpha2 < inf
  bool constant_params = false;
  double beta1 = 0.0;                 // inf lambda_min(J^T J)
  double beta2 = 0.0;                 // sup sigma_max(J)^2
  double unit_ball_inf = 0.0;         // inf lambda_min(M) with Z = I
  double unit_ball_sup = 0.0;         // sup lambda_max(M) with Z = I
  bool lower_direction_witnessed = false;
  bool upper_direction_witnessed = false;
  std::vector<std::string> messages;
};

CorollaryReport corollary_report(const Chain& chain, const BoundCertificate& cert);

/// Unit-ball parameters m = 1, h = 0, I = I3, for which Z = I6.
InertialParams unit_ball_params();

}  // namespace genrob

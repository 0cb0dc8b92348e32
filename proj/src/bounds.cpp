#include "genrob/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "genrob/dynamics.hpp"
#include "genrob/errors.hpp"

namespace genrob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_trajectories(const Chain& chain, const std::vector<ParamTrajectory>& trs) {
  if (trs.empty()) throw InvalidInput("no parameter trajectories");
  if (static_cast<int>(trs.size()) != chain.bodies())
    throw InvalidInput("expected one parameter trajectory per body (" + std::to_string(chain.bodies()) + "), got " +
                       std::to_string(trs.size()));
  for (const auto& tr : trs) {
    tr.validate();
    if (tr.times != trs.front().times) throw InvalidInput("parameter trajectories must share sample times");
  }
}

// Grid points plus any extra configurations found by the restarts.
std::vector<VecX> sample_points(const Grid& grid, std::initializer_list<const VecX*> extra) {
  std::vector<VecX> pts;
  pts.reserve(grid.size() + extra.size());
  for (std::size_t k = 0; k < grid.size(); ++k) pts.push_back(grid.point(k));
  for (const VecX* e : extra)
    if (e && e->size() > 0) pts.push_back(*e);
  return pts;
}

Theta params_at(const std::vector<ParamTrajectory>& trs, std::size_t k) {
  Theta th;
  for (const auto& tr : trs) th.push_back(tr.params[k]);
  return th;
}

Theta rates_at(const std::vector<ParamTrajectory>& trs, std::size_t k) {
  Theta th;
  for (const auto& tr : trs) th.push_back(tr.has_rates() ? tr.rates[k] : tr.rate_at(tr.times[k]));
  return th;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

InertialParams unit_ball_params() {
  InertialParams p;
  p.m = 1.0;
  p.I = Mat3::Identity();
  return p;
}

BoundCertificate certify(const Chain& chain, const std::vector<ParamTrajectory>& trs, const Grid& grid,
                         const BoundOptions& opt) {
  check_trajectories(chain, trs);
  grid.validate(chain.dof());

  BoundCertificate c;
  c.grid = grid;
  c.times = trs.front().times;
  c.consistency_inf = kInf;
  c.consistency_sup = -kInf;
  c.uniformly_consistent = true;
  c.params_upper_bounded = true;
  for (std::size_t l = 0; l < trs.size(); ++l) {
    TrajectoryMargins m = trajectory_margins(trs[l], opt.uniform_floor);
    c.consistency_inf = std::min(c.consistency_inf, m.inf_lambda_min);
    c.consistency_sup = std::max(c.consistency_sup, m.sup_lambda_max);
    const std::string body = "body " + std::to_string(l + 1);
    if (!m.consistent_at_all_samples) {
      c.notes.push_back(body + ": inconsistent at " + std::to_string(m.inconsistent_samples.size()) + " sample(s)");
    } else if (m.vanishing_trend) {
      c.notes.push_back(body + ": consistent at every sample but lambda_min(f) decays toward 0 (minimum " +
                        fmt(m.inf_lambda_min) + " at the last sample); not uniformly consistent");
    } else if (!m.uniformly_consistent) {
      c.notes.push_back(body + ": inf lambda_min(f) = " + fmt(m.inf_lambda_min) + " is below the uniform floor");
    }
    if (m.growth_trend)
      c.notes.push_back(body + ": lambda_max(f) keeps growing (maximum " + fmt(m.sup_lambda_max) +
                        " at the last sample); parameters not upper bounded");
    c.uniformly_consistent = c.uniformly_consistent && m.uniformly_consistent;
    c.params_upper_bounded = c.params_upper_bounded && m.upper_bounded;
    c.bodies.push_back(std::move(m));
  }

  c.scan = spectral_scan(chain, grid, opt.scan, opt.normal_floor);
  c.jac_inf = c.scan.inf_lambda_min;
  c.jac_sup = c.scan.sup_lambda_max;
  c.normal = c.scan.normal;
  c.upper_bounded_jac = c.scan.upper_bounded;
  if (!c.normal) c.notes.push_back("Jacobian is not normal on the grid: inf lambda_min(J^T J) = " + fmt(c.jac_inf));
  if (!c.upper_bounded_jac)
    c.notes.push_back("Jacobian depends on prismatic coordinates; sigma_max(J) is unbounded");

  c.alpha1 = (c.normal && c.uniformly_consistent) ? (1.0 - opt.epsilon) * c.consistency_inf * c.jac_inf : 0.0;
  c.alpha2 = (c.upper_bounded_jac && c.params_upper_bounded) ? 2.0 * c.consistency_sup * c.jac_sup : kInf;

  if (opt.verify) {
    std::vector<MatX> z;
    for (std::size_t k = 0; k < c.times.size(); ++k) z.push_back(block_spatial_inertia(params_at(trs, k)));
    c.sampled_min_lambda = kInf;
    c.sampled_max_lambda = -kInf;
    for (const VecX& q : sample_points(grid, {&c.scan.argmin, &c.scan.argmax})) {
      const MatX jb = body_jacobian(chain, q);
      for (const MatX& zk : z) {
        const VecX ev = symmetric_eigenvalues(jb.transpose() * zk * jb);
        c.sampled_min_lambda = std::min(c.sampled_min_lambda, ev(0));
        c.sampled_max_lambda = std::max(c.sampled_max_lambda, ev(ev.size() - 1));
        ++c.verified_points;
      }
    }
    c.lower_holds = c.sampled_min_lambda >= c.alpha1 - opt.verify_tol;
    c.upper_holds = c.sampled_max_lambda <= c.alpha2 + opt.verify_tol;
  }
  return c;
}

double lower_bound(const Chain& chain, const std::vector<ParamTrajectory>& trs, const Grid& grid,
                   const BoundOptions& opt) {
  return certify(chain, trs, grid, opt).alpha1;
}

double upper_bound(const Chain& chain, const std::vector<ParamTrajectory>& trs, const Grid& grid,
                   const BoundOptions& opt) {
  return certify(chain, trs, grid, opt).alpha2;
}

QNormReport q_norm_check(const Chain& chain, const Grid& grid, const ScanOptions& opt) {
  grid.validate(chain.dof());
  const ExtremaResult r = scan_extrema(grid, [&chain](const VecX& q) { return sigma_max(q_block(chain, q)); }, opt);
  QNormReport out;
  out.sup = r.sup;
  out.inf = r.inf;
  out.argmax = r.argmax;
  out.evaluations = r.evaluations;
  if (!(out.sup <= kQNormLimit + 1e-9)) {
    std::ostringstream os;
    os.precision(17);
    os << "sigma_max of the flow block matrix is " << out.sup << ", above sqrt(2)";
    throw InternalInconsistency(os.str());
  }
  return out;
}

RateBound rate_bound(const Chain& chain, const std::vector<ParamTrajectory>& trs, const Grid& grid) {
  check_trajectories(chain, trs);
  grid.validate(chain.dof());
  const std::size_t nt = trs.front().size();
  std::vector<MatX> zr;
  std::vector<double> chi;
  RateBound out;
  for (std::size_t k = 0; k < nt; ++k) {
    zr.push_back(block_spatial_inertia(rates_at(trs, k)));
    chi.push_back(sigma_max(zr.back()));
    out.chi = std::max(out.chi, chi.back());
  }
  double jac_sup = 0.0;
  out.worst_slack = kInf;
  for (const VecX& q : sample_points(grid, {})) {
    const MatX jb = body_jacobian(chain, q);
    const double s = sigma_max(jb);
    jac_sup = std::max(jac_sup, s * s);
    for (std::size_t k = 0; k < nt; ++k) {
      const double sig = sigma_max(jb.transpose() * zr[k] * jb);
      out.sup_sigma = std::max(out.sup_sigma, sig);
      const double slack = chi[k] * s * s - sig;
      out.worst_slack = std::min(out.worst_slack, slack);
      if (slack < -1e-9) out.envelope_holds = false;
      ++out.points;
    }
  }
  out.envelope = out.chi * jac_sup;
  return out;
}

CorollaryReport corollary_report(const Chain& chain, const BoundCertificate& cert) {
  CorollaryReport r;
  r.hypotheses_hold = cert.all_verdicts();
  r.bounds_follow = cert.alpha1 > 0.0 && cert.alpha1 <= cert.alpha2 && std::isfinite(cert.alpha2);
  r.beta1 = cert.jac_inf;
  r.beta2 = cert.jac_sup;

  r.constant_params = true;
  // Constant parameters show up as a flat pseudo-inertia spectrum.
  for (const auto& b : cert.bodies) {
    for (std::size_t k = 1; k < b.lambda_min.size(); ++k) {
      if (std::abs(b.lambda_min[k] - b.lambda_min[0]) > 1e-12 || std::abs(b.lambda_max[k] - b.lambda_max[0]) > 1e-12)
        r.constant_params = false;
    }
  }

  const Theta unit(static_cast<std::size_t>(chain.bodies()), unit_ball_params());
  r.unit_ball_inf = kInf;
  r.unit_ball_sup = -kInf;
  for (const VecX& q : sample_points(cert.grid, {&cert.scan.argmin, &cert.scan.argmax})) {
    const VecX ev = symmetric_eigenvalues(mass_matrix(chain, q, unit));
    r.unit_ball_inf = std::min(r.unit_ball_inf, ev(0));
    r.unit_ball_sup = std::max(r.unit_ball_sup, ev(ev.size() - 1));
  }
  r.lower_direction_witnessed = std::abs(r.unit_ball_inf - r.beta1) <= 1e-9;
  r.upper_direction_witnessed = std::abs(r.unit_ball_sup - r.beta2) <= 1e-9;

  if (r.bounds_follow) {
    r.messages.push_back("uniform bounds hold on the samples: 0 < alpha1 <= alpha2 < inf");
  } else {
    if (!cert.normal || !cert.uniformly_consistent)
      r.messages.push_back("no positive lower bound claimed: " +
                           std::string(!cert.normal ? "Jacobian not normal" : "parameters not uniformly consistent"));
    if (!std::isfinite(cert.alpha2))
      r.messages.push_back("no finite upper bound claimed: " +
                           std::string(!cert.upper_bounded_jac ? "Jacobian not bounded" : "parameters not upper bounded"));
  }
  if (r.lower_direction_witnessed && r.upper_direction_witnessed)
    r.messages.push_back("unit-ball parameters give M = J^T J: its bounds coincide with beta1 and beta2");
  return r;
}

}  // namespace genrob

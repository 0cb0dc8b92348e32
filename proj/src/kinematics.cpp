#include "genrob/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include <Eigen/LU>

#include "genrob/detail/kinematics_t.hpp"
#include "genrob/errors.hpp"

namespace genrob {

namespace {

constexpr double kAxisTol = 1e-9;

std::string joint_label(std::size_t k) { return "joint " + std::to_string(k); }

}  // namespace

Chain::Chain(std::vector<Joint> joints, const Vec3& gravity) : joints_(std::move(joints)), gravity_(gravity) {
  if (joints_.empty()) throw InvalidInput("chain has no joints");
  if (!gravity_.allFinite()) throw InvalidInput("chain gravity is not finite");
  Mat3 rc_prev = Mat3::Identity();
  for (std::size_t k = 0; k < joints_.size(); ++k) {
    const Joint& j = joints_[k];
    if (!j.axis.allFinite() || !j.offset.allFinite() || !j.offset_rotation.allFinite())
      throw InvalidInput(joint_label(k) + ": non-finite geometry");
    if (std::abs(j.axis.norm() - 1.0) > kAxisTol) throw InvalidInput(joint_label(k) + ": axis must be a unit vector");
    const Mat3& ro = j.offset_rotation;
    if ((ro.transpose() * ro - Mat3::Identity()).cwiseAbs().maxCoeff() > kAxisTol || ro.determinant() < 0.0)
      throw InvalidInput(joint_label(k) + ": offset rotation is not a proper rotation");

    Link link;
    link.kind = j.kind;
    link.offset_c = rc_prev * j.offset;
    link.rc = rc_prev * ro;
    link.axis_c = link.rc * j.axis;
    if (j.kind != JointKind::kFixed) link.dof = dof_++;
    if (j.kind == JointKind::kRevolute) {
      if ((link.axis_c - Vec3::UnitZ()).norm() < kAxisTol) {
        link.sign = 1.0;
      } else if ((link.axis_c + Vec3::UnitZ()).norm() < kAxisTol) {
        link.sign = -1.0;
      } else {
        throw UnsupportedChain(joint_label(k) +
                               ": revolute axis is not parallel to the world z axis; only chains whose "
                               "revolute axes all stay parallel to z are supported");
      }
    }
    link.rc_angles = rotation_angles(link.rc);
    links_.push_back(link);
    rc_prev = link.rc;
  }
  if (dof_ == 0) throw InvalidInput("chain has no movable joints");
}

bool Chain::has_revolute() const {
  return std::any_of(links_.begin(), links_.end(), [](const Link& l) { return l.kind == JointKind::kRevolute; });
}

Chain prismatic_x_chain(const Vec3& gravity) {
  Joint j;
  j.kind = JointKind::kPrismatic;
  j.axis = Vec3::UnitX();
  return Chain({j}, gravity);
}

Chain planar_chain(const std::vector<double>& lengths, const Vec3& gravity, bool tip) {
  if (lengths.empty()) throw InvalidInput("planar_chain: no links");
  std::vector<Joint> joints;
  double prev = 0.0;
  for (double len : lengths) {
    Joint j;
    j.kind = JointKind::kRevolute;
    j.offset = Vec3(prev, 0.0, 0.0);
    joints.push_back(j);
    prev = len;
  }
  if (tip) {
    Joint j;
    j.kind = JointKind::kFixed;
    j.offset = Vec3(prev, 0.0, 0.0);
    joints.push_back(j);
  }
  return Chain(std::move(joints), gravity);
}

VecX Pose::stacked() const {
  VecX out(6 * static_cast<Eigen::Index>(z.size()));
  for (std::size_t l = 0; l < z.size(); ++l) {
    out.segment<3>(6 * static_cast<Eigen::Index>(l)) = z[l];
    out.segment<3>(6 * static_cast<Eigen::Index>(l) + 3) = phi[l];
  }
  return out;
}

namespace {

void check_q(const Chain& chain, const VecX& q) {
  if (q.size() != chain.dof())
    throw InvalidInput("configuration has " + std::to_string(q.size()) + " entries, chain has " +
                       std::to_string(chain.dof()) + " degrees of freedom");
  if (!q.allFinite()) throw InvalidInput("configuration is not finite");
}

}  // namespace

Pose forward_map(const Chain& chain, const VecX& q) {
  check_q(chain, q);
  VecX f;
  detail::forward_t<double>(chain, q, &f, nullptr);
  Pose p;
  for (int l = 0; l < chain.bodies(); ++l) {
    p.z.push_back(f.segment<3>(6 * l));
    p.phi.push_back(f.segment<3>(6 * l + 3));
  }
  return p;
}

std::vector<Mat3> body_rotations(const Chain& chain, const VecX& q) {
  check_q(chain, q);
  std::vector<Mat3> rot;
  detail::forward_t<double>(chain, q, nullptr, &rot);
  return rot;
}

MatX jacobian(const Chain& chain, const VecX& q) {
  check_q(chain, q);
  return detail::jacobian_t<double>(chain, q);
}

MatX body_jacobian(const Chain& chain, const VecX& q) {
  check_q(chain, q);
  return detail::body_jacobian_t<double>(chain, q);
}

std::vector<MatX> jacobian_partials(const Chain& chain, const VecX& q) {
  check_q(chain, q);
  std::vector<MatX> out;
  for (int i = 0; i < chain.dof(); ++i) {
    const MatXT<Dual<double>> j = detail::jacobian_t<Dual<double>>(chain, detail::seed_direction(q, i));
    out.emplace_back(j.unaryExpr([](const Dual<double>& x) { return x.d; }));
  }
  return out;
}

BodyJacobian body_jacobian_with_partials(const Chain& chain, const VecX& q) {
  check_q(chain, q);
  BodyJacobian out;
  for (int i = 0; i < chain.dof(); ++i) {
    const MatXT<Dual<double>> j = detail::body_jacobian_t<Dual<double>>(chain, detail::seed_direction(q, i));
    if (i == 0) out.jb = j.unaryExpr([](const Dual<double>& x) { return x.v; });
    out.d_jb.emplace_back(j.unaryExpr([](const Dual<double>& x) { return x.d; }));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t Grid::size() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(std::max(a.count, 0));
  return n;
}

VecX Grid::point(std::size_t k) const {
  VecX q(static_cast<Eigen::Index>(axes.size()));
  for (std::size_t d = 0; d < axes.size(); ++d) {
    const GridAxis& a = axes[d];
    const auto c = static_cast<std::size_t>(a.count);
    const std::size_t idx = k % c;
    k /= c;
    q(static_cast<Eigen::Index>(d)) =
        a.count == 1 ? 0.5 * (a.min + a.max) : a.min + (a.max - a.min) * static_cast<double>(idx) / (a.count - 1);
  }
  return q;
}

VecX Grid::lower() const {
  VecX v(static_cast<Eigen::Index>(axes.size()));
  for (std::size_t d = 0; d < axes.size(); ++d) v(static_cast<Eigen::Index>(d)) = axes[d].min;
  return v;
}

VecX Grid::upper() const {
  VecX v(static_cast<Eigen::Index>(axes.size()));
  for (std::size_t d = 0; d < axes.size(); ++d) v(static_cast<Eigen::Index>(d)) = axes[d].max;
  return v;
}

Grid Grid::scaled(double factor) const {
  Grid g = *this;
  for (auto& a : g.axes) {
    const double c = 0.5 * (a.min + a.max);
    const double h = 0.5 * (a.max - a.min) * factor;
    a.min = c - h;
    a.max = c + h;
  }
  return g;
}

void Grid::validate(int dof) const {
  if (axes.empty()) throw InvalidInput("grid is empty");
  if (static_cast<int>(axes.size()) != dof)
    throw InvalidInput("grid has " + std::to_string(axes.size()) + " axes, expected " + std::to_string(dof));
  for (const auto& a : axes) {
    if (a.count < 1) throw InvalidInput("grid axis count must be >= 1");
    if (!std::isfinite(a.min) || !std::isfinite(a.max) || a.max < a.min)
      throw InvalidInput("grid axis bounds must be finite with min <= max");
  }
}

namespace {

// Compass search minimizing g inside [lo, hi]; returns the best value found.
double compass_search(const std::function<double(const VecX&)>& g, VecX& x, const VecX& lo, const VecX& hi,
                      std::size_t& evals) {
  const VecX range = hi - lo;
  VecX step = 0.25 * range;
  double fx = g(x);
  ++evals;
  for (int iter = 0; iter < 400; ++iter) {
    bool any_active = false;
    for (Eigen::Index d = 0; d < x.size(); ++d) any_active |= step(d) > 1e-7 * std::max(range(d), 1e-300);
    if (!any_active) break;
    bool improved = false;
    for (Eigen::Index d = 0; d < x.size() && !improved; ++d) {
      if (range(d) <= 0.0) continue;
      for (double dir : {1.0, -1.0}) {
        VecX y = x;
        y(d) = std::clamp(x(d) + dir * step(d), lo(d), hi(d));
        if (y(d) == x(d)) continue;
        const double fy = g(y);
        ++evals;
        if (fy < fx) {
          x = y;
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return fx;
}

}  // namespace

ExtremaResult scan_extrema(const Grid& grid, const std::function<double(const VecX&)>& f, const ScanOptions& opt) {
  const std::size_t n = grid.size();
  if (n == 0) throw InvalidInput("scan grid is empty");
  ExtremaResult r;
  r.inf = std::numeric_limits<double>::infinity();
  r.sup = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const VecX q = grid.point(k);
    const double v = f(q);
    ++r.evaluations;
    if (v < r.inf) {
      r.inf = v;
      r.argmin = q;
    }
    if (v > r.sup) {
      r.sup = v;
      r.argmax = q;
    }
  }
  const VecX lo = grid.lower();
  const VecX hi = grid.upper();
  if ((hi - lo).maxCoeff() <= 0.0) return r;

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto neg = [&f](const VecX& q) { return -f(q); };
  for (int k = 0; k <= opt.restarts; ++k) {
    VecX a, b;
    if (k == 0) {
      a = r.argmin;
      b = r.argmax;
    } else {
      a.resize(lo.size());
      for (Eigen::Index d = 0; d < lo.size(); ++d) a(d) = lo(d) + (hi(d) - lo(d)) * unit(rng);
      b = a;
    }
    const double vmin = compass_search(f, a, lo, hi, r.evaluations);
    if (vmin < r.inf) {
      r.inf = vmin;
      r.argmin = a;
    }
    const double vmax = -compass_search(neg, b, lo, hi, r.evaluations);
    if (vmax > r.sup) {
      r.sup = vmax;
      r.argmax = b;
    }
  }
  return r;
}

SpectralScan spectral_scan(const Chain& chain, const Grid& grid, const ScanOptions& opt, double normal_floor) {
  grid.validate(chain.dof());
  const auto lmin = [&chain](const VecX& q) {
    const MatX j = jacobian(chain, q);
    return lambda_min(j.transpose() * j);
  };
  const auto smax2 = [&chain](const VecX& q) {
    const double s = sigma_max(jacobian(chain, q));
    return s * s;
  };
  const ExtremaResult a = scan_extrema(grid, lmin, opt);
  const ExtremaResult b = scan_extrema(grid, smax2, opt);

  double sens = 0.0;
  std::vector<int> prismatic;
  for (const auto& l : chain.links())
    if (l.kind == JointKind::kPrismatic) prismatic.push_back(l.dof);
  if (!prismatic.empty()) {
    const std::size_t n = grid.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 64);
    std::vector<VecX> points{a.argmin, b.argmax};
    for (std::size_t k = 0; k < n; k += stride) points.push_back(grid.point(k));
    for (const VecX& q : points) {
      const std::vector<MatX> dj = jacobian_partials(chain, q);
      for (int i : prismatic) sens = std::max(sens, dj[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff());
    }
  }

  SpectralScan s;
  s.inf_lambda_min = a.inf;
  s.argmin = a.argmin;
  s.sup_lambda_max = b.sup;
  s.argmax = b.argmax;
  s.prismatic_sensitivity = sens;
  s.evaluations = a.evaluations + b.evaluations;
  s.normal = s.inf_lambda_min > normal_floor;
  s.upper_bounded = std::isfinite(s.sup_lambda_max) && sens <= 1e-12;
  return s;
}

}  // namespace genrob

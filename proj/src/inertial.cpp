#include "genrob/inertial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "genrob/errors.hpp"

namespace genrob {

Vec10 InertialParams::to_vector() const {
  Vec10 phi;
  phi << m, h(0), h(1), h(2), I(0, 0), I(1, 1), I(2, 2), I(0, 1), I(1, 2), I(0, 2);
  return phi;
}

InertialParams InertialParams::from_vector(const Eigen::Ref<const Vec10>& phi) {
  InertialParams p;
  p.m = phi(0);
  p.h = phi.segment<3>(1);
  p.I << phi(4), phi(7), phi(9),
         phi(7), phi(5), phi(8),
         phi(9), phi(8), phi(6);
  return p;
}

InertialParams& InertialParams::operator+=(const InertialParams& o) {
  m += o.m;
  h += o.h;
  I += o.I;
  return *this;
}

void validate(const InertialParams& p) {
  if (!std::isfinite(p.m) || !p.h.allFinite() || !p.I.allFinite())
    throw InvalidInput("inertial parameters contain non-finite entries");
  if ((p.I - p.I.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidInput("rotational inertia is not symmetric");
}

namespace {

// Shift a centroidal inertia to the body-frame origin.
InertialParams from_centroidal(double mass, const Mat3& ic, const Vec3& c) {
  InertialParams p;
  p.m = mass;
  p.h = mass * c;
  p.I = ic + mass * skew(c).transpose() * skew(c);
  return p;
}

}  // namespace

InertialParams sphere_params(double mass, double radius, const Vec3& center) {
  return from_centroidal(mass, 0.4 * mass * radius * radius * Mat3::Identity(), center);
}

InertialParams box_params(double mass, const Vec3& size, const Vec3& center) {
  const Vec3 sq = size.cwiseProduct(size);
  Mat3 ic = Mat3::Zero();
  ic(0, 0) = mass / 12.0 * (sq(1) + sq(2));
  ic(1, 1) = mass / 12.0 * (sq(0) + sq(2));
  ic(2, 2) = mass / 12.0 * (sq(0) + sq(1));
  return from_centroidal(mass, ic, center);
}

Mat4 pseudo_inertia(const InertialParams& p) {
  Mat4 f;
  f.topLeftCorner<3, 3>() = 0.5 * p.I.trace() * Mat3::Identity() - p.I;
  f.topRightCorner<3, 1>() = p.h;
  f.bottomLeftCorner<1, 3>() = p.h.transpose();
  f(3, 3) = p.m;
  return f;
}

InertialParams inverse_pseudo_inertia(const Mat4& f) {
  InertialParams p;
  const Mat3 sigma = f.topLeftCorner<3, 3>();
  p.m = f(3, 3);
  p.h = f.topRightCorner<3, 1>();
  p.I = sigma.trace() * Mat3::Identity() - sigma;
  return p;
}

ConsistencyResult check_consistency(const InertialParams& p, double margin) {
  if (!std::isfinite(margin) || margin < 0.0) throw InvalidInput("consistency margin must be finite and >= 0");
  validate(p);
  const VecX ev = symmetric_eigenvalues(pseudo_inertia(p));
  ConsistencyResult r;
  r.lambda_min = ev(0);
  r.lambda_max = ev(3);
  r.consistent = r.lambda_min > margin + 1e-12;
  return r;
}

void ParamTrajectory::validate() const {
  if (times.empty()) throw InvalidInput("parameter trajectory is empty");
  if (params.size() != times.size()) throw InvalidInput("parameter trajectory: times/params size mismatch");
  if (!rates.empty() && rates.size() != times.size())
    throw InvalidInput("parameter trajectory: times/rates size mismatch");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw InvalidInput("parameter trajectory: non-finite time");
    if (k > 0 && !(times[k] > times[k - 1]))
      throw InvalidInput("parameter trajectory: sample times must strictly increase");
    genrob::validate(params[k]);
    if (!rates.empty()) genrob::validate(rates[k]);
  }
}

namespace {

// Index k with times[k] <= t < times[k+1], clamped to a valid segment.
std::size_t segment(const std::vector<double>& times, double t) {
  if (times.size() < 2 || t <= times.front()) return 0;
  if (t >= times.back()) return times.size() - 2;
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  return static_cast<std::size_t>(it - times.begin()) - 1;
}

}  // namespace

InertialParams ParamTrajectory::at(double t) const {
  if (times.empty()) throw InvalidInput("parameter trajectory is empty");
  if (times.size() == 1 || t <= times.front()) return params.front();
  if (t >= times.back()) return params.back();
  const std::size_t k = segment(times, t);
  const double s = (t - times[k]) / (times[k + 1] - times[k]);
  return (1.0 - s) * params[k] + s * params[k + 1];
}

InertialParams ParamTrajectory::rate_at(double t) const {
  if (times.empty()) throw InvalidInput("parameter trajectory is empty");
  if (has_rates()) {
    if (times.size() == 1 || t <= times.front()) return rates.front();
    if (t >= times.back()) return rates.back();
    const std::size_t k = segment(times, t);
    const double s = (t - times[k]) / (times[k + 1] - times[k]);
    return (1.0 - s) * rates[k] + s * rates[k + 1];
  }
  if (times.size() == 1 || t < times.front() || t > times.back()) return InertialParams{};
  const std::size_t k = segment(times, t);
  return (1.0 / (times[k + 1] - times[k])) * (params[k + 1] + (-1.0) * params[k]);
}

TrajectoryMargins trajectory_margins(const ParamTrajectory& tr, double uniform_floor) {
  tr.validate();
  const std::size_t n = tr.size();
  TrajectoryMargins out;
  out.lambda_min.resize(n);
  out.lambda_max.resize(n);
  out.inf_lambda_min = std::numeric_limits<double>::infinity();
  out.sup_lambda_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const ConsistencyResult c = check_consistency(tr.params[k]);
    out.lambda_min[k] = c.lambda_min;
    out.lambda_max[k] = c.lambda_max;
    if (!c.consistent) out.inconsistent_samples.push_back(k);
    if (c.lambda_min < out.inf_lambda_min) {
      out.inf_lambda_min = c.lambda_min;
      out.argmin = k;
    }
    if (c.lambda_max > out.sup_lambda_max) {
      out.sup_lambda_max = c.lambda_max;
      out.argmax = k;
    }
  }
  out.consistent_at_all_samples = out.inconsistent_samples.empty();

  if (n >= 4) {
    const std::size_t half = n / 2;
    const auto head_min = *std::min_element(out.lambda_min.begin(), out.lambda_min.begin() + half);
    const auto tail_min = *std::min_element(out.lambda_min.begin() + half, out.lambda_min.end());
    const auto head_max = *std::max_element(out.lambda_max.begin(), out.lambda_max.begin() + half);
    const auto tail_max = *std::max_element(out.lambda_max.begin() + half, out.lambda_max.end());
    const bool decreasing = std::is_sorted(out.lambda_min.rbegin(), out.lambda_min.rend());
    const bool increasing = std::is_sorted(out.lambda_max.begin(), out.lambda_max.end());
    out.vanishing_trend = decreasing && head_min > 0.0 && tail_min < kVanishingRatio * head_min;
    out.growth_trend = increasing && head_max > 0.0 && tail_max > kGrowthRatio * head_max;
  }
  out.uniformly_consistent =
      out.consistent_at_all_samples && out.inf_lambda_min > uniform_floor && !out.vanishing_trend;
  out.upper_bounded = std::isfinite(out.sup_lambda_max) && !out.growth_trend;
  return out;
}

Mat6 spatial_inertia(const InertialParams& p) {
  Mat6 z;
  const Mat3 sh = skew(p.h);
  z.topLeftCorner<3, 3>() = p.m * Mat3::Identity();
  z.topRightCorner<3, 3>() = -sh;
  z.bottomLeftCorner<3, 3>() = -sh.transpose();
  z.bottomRightCorner<3, 3>() = p.I;
  return z;
}

MatX block_spatial_inertia(const std::vector<InertialParams>& theta) {
  if (theta.empty()) throw InvalidInput("block_spatial_inertia: no bodies");
  const auto n = static_cast<Eigen::Index>(theta.size());
  MatX z = MatX::Zero(6 * n, 6 * n);
  for (Eigen::Index l = 0; l < n; ++l) z.block<6, 6>(6 * l, 6 * l) = spatial_inertia(theta[l]);
  return z;
}

VecX stack_params(const std::vector<InertialParams>& theta) {
  VecX out(10 * static_cast<Eigen::Index>(theta.size()));
  for (std::size_t l = 0; l < theta.size(); ++l) out.segment<10>(10 * static_cast<Eigen::Index>(l)) = theta[l].to_vector();
  return out;
}

std::vector<InertialParams> unstack_params(const VecX& theta) {
  if (theta.size() % 10 != 0) throw InvalidInput("stacked parameter vector length is not a multiple of 10");
  std::vector<InertialParams> out;
  out.reserve(static_cast<std::size_t>(theta.size() / 10));
  for (Eigen::Index l = 0; l < theta.size() / 10; ++l)
    out.push_back(InertialParams::from_vector(theta.segment<10>(10 * l)));
  return out;
}

}  // namespace genrob

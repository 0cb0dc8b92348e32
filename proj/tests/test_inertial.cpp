#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "genrob/errors.hpp"
#include "genrob/inertial.hpp"
#include "support.hpp"

using namespace genrob;
using namespace genrob::testing;

namespace {

InertialParams unit_ball() {
  InertialParams p;
  p.m = 1.0;
  p.I = Mat3::Identity();
  return p;
}

Mat4 diag4(double a, double b, double c, double d) { return Eigen::Vector4d(a, b, c, d).asDiagonal(); }

ParamTrajectory sphere_series(const std::vector<double>& masses, double radius) {
  ParamTrajectory tr;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    tr.times.push_back(static_cast<double>(k));
    tr.params.push_back(sphere_params(masses[k], radius));
  }
  return tr;
}

}  // namespace

TEST(PseudoInertia, UnitBall) {
  EXPECT_LT((pseudo_inertia(unit_ball()) - diag4(0.5, 0.5, 0.5, 1.0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PseudoInertia, SolidSphere) {
  const double m = 3.0, r = 0.7;
  const Mat4 expected = m * diag4(r * r / 5, r * r / 5, r * r / 5, 1.0);
  EXPECT_LT((pseudo_inertia(sphere_params(m, r)) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PseudoInertia, PointMassAtOrigin) {
  InertialParams p;
  p.m = 1.0;
  EXPECT_EQ(pseudo_inertia(p), diag4(0, 0, 0, 1));
  EXPECT_FALSE(check_consistency(p).consistent);
}

TEST(PseudoInertia, InverseOfUnitBallValue) {
  const InertialParams p = inverse_pseudo_inertia(diag4(0.5, 0.5, 0.5, 1.0));
  EXPECT_DOUBLE_EQ(p.m, 1.0);
  EXPECT_EQ(p.h, Vec3::Zero());
  EXPECT_LT((p.I - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PseudoInertia, InverseOfZero) {
  const InertialParams p = inverse_pseudo_inertia(Mat4::Zero());
  EXPECT_EQ(p.to_vector(), Vec10::Zero());
}

TEST(PseudoInertia, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const InertialParams p = random_params(rng);
    const InertialParams back = inverse_pseudo_inertia(pseudo_inertia(p));
    ASSERT_LT((back.to_vector() - p.to_vector()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Params, VectorLayout) {
  InertialParams p;
  p.m = 1;
  p.h = Vec3(2, 3, 4);
  p.I << 5, 8, 10, 8, 6, 9, 10, 9, 7;
  Vec10 expected;
  expected << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10;
  EXPECT_EQ(p.to_vector(), expected);
  EXPECT_EQ(InertialParams::from_vector(expected).I, p.I);
}

TEST(Params, ValidateRejects) {
  InertialParams p = unit_ball();
  p.I(0, 1) = 1e-6;
  EXPECT_THROW(validate(p), InvalidInput);
  p = unit_ball();
  p.m = std::nan("");
  EXPECT_THROW(validate(p), InvalidInput);
}

TEST(Consistency, UnitBallMargin) {
  const ConsistencyResult c = check_consistency(unit_ball());
  EXPECT_TRUE(c.consistent);
  EXPECT_NEAR(c.lambda_min, 0.5, 1e-12);
  EXPECT_NEAR(c.lambda_max, 1.0, 1e-12);
}

TEST(Consistency, NegativeMass) {
  InertialParams p = unit_ball();
  p.m = -1.0;
  EXPECT_FALSE(check_consistency(p).consistent);
}

TEST(Consistency, TinySphereIsCloseToTheEdge) {
  const ConsistencyResult c = check_consistency(sphere_params(1e-9, 1.0));
  EXPECT_TRUE(c.consistent);
  EXPECT_NEAR(c.lambda_min, 2e-10, 1e-21);
}

TEST(Consistency, MarginIsStrict) {
  EXPECT_TRUE(check_consistency(unit_ball(), 0.49).consistent);
  EXPECT_FALSE(check_consistency(unit_ball(), 0.5).consistent);
  EXPECT_THROW(check_consistency(unit_ball(), -1.0), InvalidInput);
}

TEST(Consistency, BoxAndThinRod) {
  EXPECT_TRUE(check_consistency(box_params(2.0, Vec3(1.0, 0.1, 0.1), Vec3(0.5, 0, 0))).consistent);
  // A line of mass has zero extent in two directions: Sigma is singular.
  InertialParams rod;
  rod.m = 1.0;
  rod.I = Vec3(0.0, 1.0 / 3, 1.0 / 3).asDiagonal();
  EXPECT_FALSE(check_consistency(rod).consistent);
}

TEST(Trajectory, ConstantSphere) {
  const TrajectoryMargins m = trajectory_margins(sphere_series({1, 1, 1, 1, 1}, std::sqrt(5.0)));
  EXPECT_NEAR(m.inf_lambda_min, 1.0, 1e-12);
  EXPECT_NEAR(m.sup_lambda_max, 1.0, 1e-12);
  EXPECT_TRUE(m.uniformly_consistent);
  EXPECT_TRUE(m.upper_bounded);
}

TEST(Trajectory, VanishingMassIsNotUniform) {
  std::vector<double> masses;
  for (int k = 0; k <= 20; ++k) masses.push_back(std::exp(-k));
  const TrajectoryMargins m = trajectory_margins(sphere_series(masses, std::sqrt(5.0)));
  EXPECT_TRUE(m.consistent_at_all_samples);
  EXPECT_TRUE(m.vanishing_trend);
  EXPECT_FALSE(m.uniformly_consistent);
  EXPECT_TRUE(m.upper_bounded);
  EXPECT_EQ(m.argmin, masses.size() - 1);
}

TEST(Trajectory, GrowingMassIsNotUpperBounded) {
  std::vector<double> masses;
  for (int k = 1; k <= 12; ++k) masses.push_back(k);
  const TrajectoryMargins m = trajectory_margins(sphere_series(masses, std::sqrt(5.0)));
  EXPECT_TRUE(m.uniformly_consistent);
  EXPECT_TRUE(m.growth_trend);
  EXPECT_FALSE(m.upper_bounded);
}

TEST(Trajectory, OscillationHasNoTrend) {
  std::vector<double> masses;
  for (int k = 0; k < 40; ++k) masses.push_back(1.0 + 0.5 * std::sin(0.7 * k));
  const TrajectoryMargins m = trajectory_margins(sphere_series(masses, 1.0));
  EXPECT_TRUE(m.uniformly_consistent);
  EXPECT_TRUE(m.upper_bounded);
}

TEST(Trajectory, OscillationEndingAtItsMinimumHasNoTrend) {
  // Rises, then falls: the last sample is the smallest and well below the
  // first half, but the sequence is not monotone.
  std::vector<double> masses;
  for (int k = 0; k <= 8; ++k) masses.push_back(1.0 + 0.6 * std::sin(kPi / 8 * (k + 2)));
  const TrajectoryMargins m = trajectory_margins(sphere_series(masses, 1.0));
  EXPECT_EQ(m.argmin, masses.size() - 1);
  EXPECT_FALSE(m.vanishing_trend);
  EXPECT_TRUE(m.uniformly_consistent);
}

TEST(Trajectory, DecayToPositiveFloorIsUniform) {
  std::vector<double> masses;
  for (int k = 0; k <= 20; ++k) masses.push_back(0.5 + 0.5 * std::exp(-k));
  const TrajectoryMargins m = trajectory_margins(sphere_series(masses, 1.0));
  EXPECT_FALSE(m.vanishing_trend);
  EXPECT_TRUE(m.uniformly_consistent);
}

TEST(Trajectory, ReportsInconsistentSamples) {
  const TrajectoryMargins m = trajectory_margins(sphere_series({1, 1, -1, 1}, 1.0));
  EXPECT_FALSE(m.consistent_at_all_samples);
  ASSERT_EQ(m.inconsistent_samples.size(), 1u);
  EXPECT_EQ(m.inconsistent_samples[0], 2u);
  EXPECT_FALSE(m.uniformly_consistent);
}

TEST(Trajectory, Validation) {
  EXPECT_THROW(trajectory_margins(ParamTrajectory{}), InvalidInput);
  ParamTrajectory tr = sphere_series({1, 1}, 1.0);
  tr.times = {1.0, 1.0};
  EXPECT_THROW(tr.validate(), InvalidInput);
}

TEST(Trajectory, InterpolatesAndClamps) {
  const ParamTrajectory tr = sphere_series({1, 3}, 1.0);
  EXPECT_NEAR(tr.at(0.25).m, 1.5, 1e-15);
  EXPECT_NEAR(tr.at(-5.0).m, 1.0, 1e-15);
  EXPECT_NEAR(tr.at(9.0).m, 3.0, 1e-15);
  EXPECT_NEAR(tr.rate_at(0.5).m, 2.0, 1e-15);
}

TEST(SpatialInertia, UnitBallIsIdentity) { EXPECT_EQ(spatial_inertia(unit_ball()), Mat6::Identity()); }

TEST(SpatialInertia, PointMass) {
  InertialParams p;
  p.m = 2.0;
  Mat6 expected = Mat6::Zero();
  expected.topLeftCorner<3, 3>() = 2.0 * Mat3::Identity();
  EXPECT_EQ(spatial_inertia(p), expected);
}

TEST(SpatialInertia, PositiveForConsistentParams) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 200; ++k) {
    const InertialParams p = random_params(rng);
    const Mat6 z = spatial_inertia(p);
    EXPECT_LT((z - z.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_GT(lambda_min(z), 0.0);
  }
}

// Lower bound on Z from the pseudo-inertia margin, and the factor-two upper bound.
TEST(SpatialInertia, BoundedByPseudoInertiaSpectrum) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 1000; ++k) {
    const InertialParams p = random_params(rng, 3 + k % 5);
    const VecX f = symmetric_eigenvalues(pseudo_inertia(p));
    const double xi = f(0), zeta = f(3);
    const VecX z = symmetric_eigenvalues(spatial_inertia(p));
    ASSERT_GE(z(0), xi - 1e-9);
    ASSERT_LE(z(5), 2.0 * zeta + 1e-9);
  }
}

TEST(SpatialInertia, BlockAssemblyIsLinear) {
  std::mt19937_64 rng(14);
  const auto t1 = random_raw_theta(rng, 3), t2 = random_raw_theta(rng, 3);
  const double a = 0.7, b = -1.3;
  std::vector<InertialParams> mix;
  for (int l = 0; l < 3; ++l) mix.push_back(a * t1[l] + b * t2[l]);
  const MatX lhs = block_spatial_inertia(mix);
  const MatX rhs = a * block_spatial_inertia(t1) + b * block_spatial_inertia(t2);
  EXPECT_LT(max_abs(lhs - rhs), 1e-14);
  EXPECT_EQ(block_spatial_inertia({unit_ball(), unit_ball()}), MatX::Identity(12, 12));
}

TEST(SpatialInertia, BlockSpectrumIsUnionOfBlocks) {
  std::mt19937_64 rng(15);
  const auto theta = random_theta(rng, 3);
  double expected = 1e300;
  for (const auto& p : theta) expected = std::min(expected, lambda_min(spatial_inertia(p)));
  EXPECT_NEAR(lambda_min(block_spatial_inertia(theta)), expected, 1e-12);
}

// Pseudo-inertia rates bounded by mu bound the diagonal of the inertia rate by 4 mu.
TEST(SpatialInertia, RateDiagonalBound) {
  std::mt19937_64 rng(16);
  for (int k = 0; k < 1000; ++k) {
    Mat4 a = Mat4::NullaryExpr([&] { return uniform(rng, -1, 1); });
    a = 0.5 * (a + a.transpose()).eval();
    const double mu = sigma_max(a);
    const InertialParams rate = inverse_pseudo_inertia(a);
    for (int i = 0; i < 3; ++i) ASSERT_LE(std::abs(rate.I(i, i)), 4.0 * mu + 1e-12);
  }
}

TEST(Stacking, RoundTrip) {
  std::mt19937_64 rng(17);
  const auto theta = random_raw_theta(rng, 4);
  const auto back = unstack_params(stack_params(theta));
  ASSERT_EQ(back.size(), 4u);
  for (int l = 0; l < 4; ++l) EXPECT_EQ(back[l].to_vector(), theta[l].to_vector());
  EXPECT_THROW(unstack_params(VecX::Zero(7)), InvalidInput);
}

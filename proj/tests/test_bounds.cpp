#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "genrob/bounds.hpp"
#include "genrob/dynamics.hpp"
#include "genrob/errors.hpp"
#include "support.hpp"

using namespace genrob;
using namespace genrob::testing;

namespace {

ParamTrajectory constant_trajectory(const InertialParams& p, const std::vector<double>& times) {
  return sample_trajectory(constant_body(p), times);
}

ParamTrajectory law_trajectory(const InertialParams& unit, TimeLaw law, const std::vector<double>& times) {
  return sample_trajectory(ScaledInertia{unit, law}, times);
}

std::vector<double> span(double a, double b, int count) {
  std::vector<double> t;
  for (int k = 0; k < count; ++k) t.push_back(a + (b - a) * k / (count - 1));
  return t;
}

Grid square_grid(int n, int count) {
  Grid g;
  for (int i = 0; i < n; ++i) g.axes.push_back({-kPi, kPi, count});
  return g;
}

const Grid kLine{{{-5.0, 5.0, 11}}};

InertialParams unit_sphere() { return sphere_params(1.0, std::sqrt(5.0)); }

}  // namespace

TEST(Certify, PrismaticSphere) {
  const BoundCertificate c = certify(prismatic_x_chain(), {constant_trajectory(unit_sphere(), {0, 1})}, kLine);
  EXPECT_TRUE(c.all_verdicts());
  EXPECT_NEAR(c.alpha1, 1.0 - 1e-6, 1e-12);
  EXPECT_LT(c.alpha1, 1.0);
  EXPECT_NEAR(c.alpha2, 2.0, 1e-12);
  EXPECT_NEAR(c.sampled_min_lambda, 1.0, 1e-12);
  EXPECT_TRUE(c.lower_holds);
  EXPECT_TRUE(c.upper_holds);
  EXPECT_EQ(lower_bound(prismatic_x_chain(), {constant_trajectory(unit_sphere(), {0})}, kLine), c.alpha1);
  EXPECT_EQ(upper_bound(prismatic_x_chain(), {constant_trajectory(unit_sphere(), {0})}, kLine), c.alpha2);
}

TEST(Certify, UnitBallParameters) {
  const Chain c = planar_chain({1.0, 1.0}, Vec3::Zero(), true);
  std::vector<ParamTrajectory> trs(3, constant_trajectory(unit_ball_params(), {0.0}));
  const BoundCertificate cert = certify(c, trs, square_grid(2, 24));
  EXPECT_NEAR(cert.alpha1, 0.5 * (1 - 1e-6) * cert.jac_inf, 1e-15);
  EXPECT_NEAR(cert.alpha2, 2.0 * cert.jac_sup, 1e-12);
  EXPECT_NEAR(cert.jac_inf, (11.0 - std::sqrt(89.0)) / 2, 1e-9);
  // Z = I: the mass matrix spectrum is exactly that of J^T J.
  EXPECT_NEAR(cert.sampled_min_lambda, cert.jac_inf, 1e-9);
  EXPECT_NEAR(cert.sampled_max_lambda, cert.jac_sup, 1e-9);

  const CorollaryReport r = corollary_report(c, cert);
  EXPECT_TRUE(r.hypotheses_hold);
  EXPECT_TRUE(r.bounds_follow);
  EXPECT_TRUE(r.constant_params);
  EXPECT_TRUE(r.lower_direction_witnessed);
  EXPECT_TRUE(r.upper_direction_witnessed);
}

TEST(Certify, VanishingMassSphere) {
  const auto trs = {law_trajectory(unit_sphere(), TimeLaw::exponential(1.0, -1.0), span(0, 20, 21))};
  const BoundCertificate c = certify(prismatic_x_chain(), trs, kLine);
  EXPECT_TRUE(c.bodies[0].consistent_at_all_samples);
  EXPECT_FALSE(c.uniformly_consistent);
  EXPECT_EQ(c.alpha1, 0.0);
  EXPECT_TRUE(c.params_upper_bounded);
  EXPECT_FALSE(c.notes.empty());
  const CorollaryReport r = corollary_report(prismatic_x_chain(), c);
  EXPECT_FALSE(r.hypotheses_hold);
  EXPECT_FALSE(r.bounds_follow);
}

TEST(Certify, GrowingMassSphere) {
  const auto trs = {law_trajectory(unit_sphere(), TimeLaw::linear(1.0, 1.0), span(0, 10, 11))};
  const BoundCertificate c = certify(prismatic_x_chain(), trs, kLine);
  EXPECT_TRUE(c.uniformly_consistent);
  EXPECT_FALSE(c.params_upper_bounded);
  EXPECT_TRUE(std::isinf(c.alpha2));
  EXPECT_GT(c.alpha1, 0.0);
}

TEST(Certify, RankFloorGatesTheLowerBound) {
  // Joint l moves body l and no later joint does, so J is block triangular
  // with full column rank on every supported chain. Raising the floor above
  // inf lambda_min(J^T J) exercises the non-normal branch.
  const Chain c = planar_chain({1.0, 1.0}, Vec3::Zero(), true);
  std::vector<ParamTrajectory> trs(3, constant_trajectory(unit_ball_params(), {0.0}));
  BoundOptions opt;
  opt.normal_floor = 1.0;
  const BoundCertificate cert = certify(c, trs, square_grid(2, 12), opt);
  EXPECT_FALSE(cert.normal);
  EXPECT_EQ(cert.alpha1, 0.0);
  EXPECT_TRUE(std::isfinite(cert.alpha2));
  EXPECT_FALSE(corollary_report(c, cert).hypotheses_hold);
}

TEST(Certify, SoundOnRandomTimeVaryingBodies) {
  std::mt19937_64 rng(71);
  const Chain c = planar_chain({1.0, 0.8, 0.6}, Vec3::Zero());
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<ParamTrajectory> trs;
    for (int l = 0; l < 3; ++l)
      trs.push_back(law_trajectory(random_params(rng),
                                   TimeLaw::sinusoid(1.0, uniform(rng, 0.1, 0.6), uniform(rng, 0.5, 2.0)),
                                   span(0, 3, 7)));
    const BoundCertificate cert = certify(c, trs, square_grid(3, 7), {{2, 5}});
    ASSERT_TRUE(cert.all_verdicts()) << cert.normal << cert.upper_bounded_jac << cert.uniformly_consistent
                                     << cert.params_upper_bounded;
    EXPECT_TRUE(cert.lower_holds);
    EXPECT_TRUE(cert.upper_holds);
    EXPECT_GE(cert.sampled_min_lambda, cert.alpha1 - 1e-9);
    EXPECT_LE(cert.sampled_max_lambda, cert.alpha2 + 1e-9);
    EXPECT_EQ(cert.verified_points, (343u + 2u) * 7u);
  }
}

TEST(Certify, RejectsMismatchedInputs) {
  const Chain c = planar_chain({1.0, 1.0}, Vec3::Zero());
  const Grid g = square_grid(2, 3);
  EXPECT_THROW(certify(c, {constant_trajectory(unit_sphere(), {0})}, g), InvalidInput);
  EXPECT_THROW(certify(c, {constant_trajectory(unit_sphere(), {0}), constant_trajectory(unit_sphere(), {1})}, g),
               InvalidInput);
  EXPECT_THROW(certify(c, {constant_trajectory(unit_sphere(), {0}), constant_trajectory(unit_sphere(), {0})},
                       square_grid(3, 2)),
               InvalidInput);
}

TEST(QNorm, BoundedForEveryChain) {
  for (const Chain& c : test_chains()) {
    Grid g;
    for (int i = 0; i < c.dof(); ++i) g.axes.push_back({-kPi, kPi, 6});
    const QNormReport r = q_norm_check(c, g);
    EXPECT_LE(r.sup, kQNormLimit + 1e-9);
    EXPECT_GE(r.inf, 1.0 - 1e-12);
  }
}

TEST(RateBound, ConstantParametersGiveZero) {
  const RateBound r = rate_bound(prismatic_x_chain(), {constant_trajectory(unit_sphere(), {0, 1, 2})}, kLine);
  EXPECT_EQ(r.sup_sigma, 0.0);
  EXPECT_EQ(r.chi, 0.0);
  EXPECT_TRUE(r.envelope_holds);
}

TEST(RateBound, PrismaticMassRate) {
  const auto trs = {law_trajectory(unit_sphere(), TimeLaw::linear(1.0, 0.1), span(0, 1, 5))};
  const RateBound r = rate_bound(prismatic_x_chain(), trs, kLine);
  EXPECT_NEAR(r.sup_sigma, 0.1, 1e-15);
  EXPECT_TRUE(r.envelope_holds);
  EXPECT_EQ(r.points, 11u * 5u);
}

TEST(RateBound, EnvelopeHoldsPointwise) {
  std::mt19937_64 rng(72);
  const Chain c = planar_chain({1.0, 0.8}, Vec3::Zero(), true);
  std::vector<ParamTrajectory> trs;
  for (int l = 0; l < 3; ++l) {
    ParamTrajectory tr;
    for (int k = 0; k < 4; ++k) {
      tr.times.push_back(k);
      tr.params.push_back(random_params(rng));
      tr.rates.push_back(random_raw_params(rng));
    }
    trs.push_back(tr);
  }
  const RateBound r = rate_bound(c, trs, square_grid(2, 12));
  EXPECT_TRUE(r.envelope_holds);
  EXPECT_GE(r.worst_slack, -1e-9);
  EXPECT_LE(r.sup_sigma, r.envelope + 1e-9);
}

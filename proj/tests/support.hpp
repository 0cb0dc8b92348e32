#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <gtest/gtest.h>

#include "genrob/algebra.hpp"
#include "genrob/bodies.hpp"
#include "genrob/inertial.hpp"
#include "genrob/kinematics.hpp"

namespace genrob::testing {

inline constexpr double kPi = 3.141592653589793;

inline std::string scenario_path(const std::string& name) {
  return std::string(GENROB_SCENARIO_DIR) + "/" + name;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline VecX random_vec(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  VecX v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(rng, -scale, scale);
  return v;
}

inline Vec3 random_vec3(std::mt19937_64& rng, double scale = 1.0) { return random_vec(rng, 3, scale); }

inline Mat3 random_rotation(std::mt19937_64& rng) { return rotation(random_vec3(rng, kPi)); }

// Physically consistent parameters built from a handful of random point
// masses, so the test does not rely on check_consistency to accept them.
inline InertialParams random_params(std::mt19937_64& rng, int points = 6) {
  InertialParams p;
  for (int k = 0; k < points; ++k) {
    const double w = uniform(rng, 0.1, 1.0);
    const Vec3 x = random_vec3(rng, 0.8);
    p.m += w;
    p.h += w * x;
    p.I += w * skew(x).transpose() * skew(x);
  }
  return p;
}

// Any parameter vector, consistent or not; used for linearity and rate tests.
inline InertialParams random_raw_params(std::mt19937_64& rng) {
  return InertialParams::from_vector(random_vec(rng, 10));
}

inline std::vector<InertialParams> random_theta(std::mt19937_64& rng, int bodies) {
  std::vector<InertialParams> t;
  for (int l = 0; l < bodies; ++l) t.push_back(random_params(rng));
  return t;
}

inline std::vector<InertialParams> random_raw_theta(std::mt19937_64& rng, int bodies) {
  std::vector<InertialParams> t;
  for (int l = 0; l < bodies; ++l) t.push_back(random_raw_params(rng));
  return t;
}

inline double max_abs(const MatX& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

// Central difference of a matrix-valued function of one scalar.
inline MatX central(const std::function<MatX(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Observed convergence order from errors at steps h and h/10.
inline double order_from(double e_coarse, double e_fine) { return std::log10(e_coarse / e_fine); }

inline const std::vector<Chain>& test_chains() {
  static const std::vector<Chain> chains = {
      prismatic_x_chain(Vec3(0.0, 0.0, -9.81)),
      planar_chain({1.0, 0.8}, Vec3(0.0, -9.81, 0.0)),
      planar_chain({1.0, 0.8, 0.6}, Vec3(0.0, -9.81, 0.0)),
      planar_chain({1.0, 1.0}, Vec3::Zero(), true),
  };
  return chains;
}

inline VecX random_q(const Chain& chain, std::mt19937_64& rng) {
  VecX q(chain.dof());
  for (const auto& l : chain.links())
    if (l.dof >= 0) q(l.dof) = l.kind == JointKind::kRevolute ? uniform(rng, -kPi, kPi) : uniform(rng, -2.0, 2.0);
  return q;
}

}  // namespace genrob::testing

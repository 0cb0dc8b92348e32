#include "genrob/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "genrob/errors.hpp"

namespace genrob {

Vec3 rotation_angles(const Mat3& r) {
  // r = Rz(c) Ry(b) Rx(a): r(2,0) = -sin(b).
  const double sb = std::clamp(-r(2, 0), -1.0, 1.0);
  const double b = std::asin(sb);
  double a = 0.0;
  double c = 0.0;
  if (std::abs(sb) < 1.0 - 1e-12) {
    a = std::atan2(r(2, 1), r(2, 2));
    c = std::atan2(r(1, 0), r(0, 0));
  } else {
    // Gimbal lock: only a -/+ c is determined; put it all in a.
    c = 0.0;
    a = std::atan2(sb * r(0, 1), r(1, 1));
  }
  return {a, b, c};
}

std::pair<MatX, MatX> st_matrices() {
  MatX s = MatX::Zero(3, 9);
  s(0, 5) = -1.0;
  s(0, 7) = 1.0;
  s(1, 2) = 1.0;
  s(1, 6) = -1.0;
  s(2, 1) = -1.0;
  s(2, 3) = 1.0;

  // T maps the stacked columns of X to the stacked columns of X^T.
  MatX t = MatX::Zero(9, 9);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) t(3 * i + j, 3 * j + i) = 1.0;
  }
  return {s, t};
}

Mat3 lemma5_factorization(const Vec3& x, const Mat3& r) {
  static const auto st = st_matrices();
  const MatX& s = st.first;
  const MatX& t = st.second;
  const MatX a33 = block_replicate(MatX(r));
  const MatX a31 = block_replicate(MatX(x));
  return -(s * a33 * t * a31);
}

bool all_finite(const MatX& a) { return a.allFinite(); }

VecX symmetric_eigenvalues(const MatX& input) {
  if (input.rows() != input.cols()) throw InvalidInput("symmetric_eigenvalues: matrix is not square");
  if (!input.allFinite()) throw NumericFailure("symmetric_eigenvalues: non-finite entry");
  const auto n = input.rows();
  MatX a = 0.5 * (input + input.transpose());
  if (n <= 1) return a.diagonal();

  constexpr int kMaxSweeps = 100;
  constexpr double kTol = 1e-12;
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > kTol * scale * 1e-3; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  if (off_norm() > kTol * scale) {
    std::ostringstream os;
    os << "symmetric_eigenvalues: Jacobi iteration did not converge after " << sweep << " sweeps";
    throw NumericFailure(os.str());
  }
  VecX ev = a.diagonal();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

double lambda_min(const MatX& a) { return symmetric_eigenvalues(a)(0); }

double lambda_max(const MatX& a) {
  const VecX ev = symmetric_eigenvalues(a);
  return ev(ev.size() - 1);
}

double sigma_max(const MatX& a) {
  if (a.size() == 0) return 0.0;
  const MatX gram = a.rows() <= a.cols() ? MatX(a * a.transpose()) : MatX(a.transpose() * a);
  return std::sqrt(std::max(0.0, lambda_max(gram)));
}

}  // namespace genrob

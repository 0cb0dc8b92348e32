#pragma once

#include <utility>

#include <Eigen/Core>

namespace genrob {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

template <class T>
using Vec3T = Eigen::Matrix<T, 3, 1>;
template <class T>
using Mat3T = Eigen::Matrix<T, 3, 3>;
template <class T>
using MatXT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using VecXT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Cross-product matrix: skew(x) * y == x.cross(y).
template <class T>
Mat3T<T> skew(const Vec3T<T>& x) {
  Mat3T<T> s;
  s << T(0.0), -x(2), x(1),
       x(2), T(0.0), -x(0),
       -x(1), x(0), T(0.0);
  return s;
}
inline Mat3 skew(const Vec3& x) { return skew<double>(x); }

/// diag(B, B, B).
template <class T>
MatXT<T> block_replicate(const MatXT<T>& b) {
  const auto r = b.rows();
  const auto c = b.cols();
  MatXT<T> out = MatXT<T>::Zero(3 * r, 3 * c);
  for (int k = 0; k < 3; ++k) out.block(k * r, k * c, r, c) = b;
  return out;
}
inline MatX block_replicate(const MatX& b) { return block_replicate<double>(b); }

/// Elementary rotation about the third axis.
template <class T>
Mat3T<T> rot_z(const T& angle) {
  using std::cos;
  using std::sin;
  const T c = cos(angle);
  const T s = sin(angle);
  Mat3T<T> r;
  r << c, -s, T(0.0),
       s, c, T(0.0),
       T(0.0), T(0.0), T(1.0);
  return r;
}

/// Orientation matrix R(phi) = Rz(phi3) * Ry(phi2) * Rx(phi1) (extrinsic XYZ).
template <class T>
Mat3T<T> rotation(const Vec3T<T>& phi) {
  using std::cos;
  using std::sin;
  const T c1 = cos(phi(0)), s1 = sin(phi(0));
  const T c2 = cos(phi(1)), s2 = sin(phi(1));
  Mat3T<T> rx, ry;
  rx << T(1.0), T(0.0), T(0.0),
        T(0.0), c1, -s1,
        T(0.0), s1, c1;
  ry << c2, T(0.0), s2,
        T(0.0), T(1.0), T(0.0),
        -s2, T(0.0), c2;
  return Mat3T<T>(rot_z(phi(2)) * ry * rx);
}
inline Mat3 rotation(const Vec3& phi) { return rotation<double>(phi); }

/// Angles phi with rotation(phi) == r, for orthonormal r.
Vec3 rotation_angles(const Mat3& r);

/// The constant 3x9 generator S and 9x9 permutation T with
/// skew(x) * R == -S * block_replicate(R) * T * block_replicate(x).
std::pair<MatX, MatX> st_matrices();

/// -S * A33(R) * T * A31(x); equals skew(x) * R.
Mat3 lemma5_factorization(const Vec3& x, const Mat3& r);

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi,
/// off-diagonal tolerance 1e-12 relative to the Frobenius norm, at most
/// 100 sweeps). Throws NumericFailure on non-convergence or non-finite input.
VecX symmetric_eigenvalues(const MatX& a);

double lambda_min(const MatX& a);
double lambda_max(const MatX& a);

/// Largest singular value, from the smaller of A*A^T and A^T*A.
double sigma_max(const MatX& a);

bool all_finite(const MatX& a);

}  // namespace genrob

#pragma once

// Forward-mode dual numbers. Nesting (Dual<Dual<double>>) yields mixed second
// partials, which is how the Jacobian partials and all q-derivatives of the
// dynamics are evaluated exactly.

#include <cmath>
#include <type_traits>

#include <Eigen/Core>

namespace genrob {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // directional derivative

  constexpr Dual() = default;
  template <class A, class = std::enable_if_t<std::is_arithmetic_v<A>>>
  constexpr Dual(A value) : v(static_cast<double>(value)), d(0.0) {}  // NOLINT
  constexpr Dual(T value, T derivative) : v(value), d(derivative) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

template <class T>
Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T>
Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T>
Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T>
Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }
template <class T>
Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T>
Dual<T> operator+(const Dual<T>& a) { return a; }

template <class T>
Dual<T> operator*(const Dual<T>& a, double s) { return {a.v * s, a.d * s}; }
template <class T>
Dual<T> operator*(double s, const Dual<T>& a) { return {a.v * s, a.d * s}; }
template <class T>
Dual<T> operator+(const Dual<T>& a, double s) { return {a.v + s, a.d}; }
template <class T>
Dual<T> operator+(double s, const Dual<T>& a) { return {a.v + s, a.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a, double s) { return {a.v - s, a.d}; }
template <class T>
Dual<T> operator-(double s, const Dual<T>& a) { return {s - a.v, -a.d}; }

template <class T>
bool operator==(const Dual<T>& a, const Dual<T>& b) { return a.v == b.v && a.d == b.d; }
template <class T>
bool operator!=(const Dual<T>& a, const Dual<T>& b) { return !(a == b); }

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -(a.d * sin(a.v))};
}

/// Seeds a dual variable with unit derivative.
template <class T>
Dual<T> seed(const T& value) { return {value, T(1.0)}; }

/// Plain value of a possibly nested scalar.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.v); }

}  // namespace genrob

namespace Eigen {

template <class T>
struct NumTraits<genrob::Dual<T>> : GenericNumTraits<genrob::Dual<T>> {
  using Real = genrob::Dual<T>;
  using NonInteger = genrob::Dual<T>;
  using Literal = genrob::Dual<T>;
  using Nested = genrob::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 2,
    MulCost = 4
  };
  static inline Real epsilon() { return Real(NumTraits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(NumTraits<double>::dummy_precision()); }
  static inline int digits10() { return NumTraits<double>::digits10(); }
};

}  // namespace Eigen

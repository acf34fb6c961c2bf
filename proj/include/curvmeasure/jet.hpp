#pragma once

#include <cmath>

namespace curvmeasure {

/// Second-order forward-mode dual number in two variables: a value together
/// with its gradient and Hessian with respect to (u, v).
struct Jet2 {
  double value = 0.0;
  double du = 0.0;
  double dv = 0.0;
  double duu = 0.0;
  double duv = 0.0;
  double dvv = 0.0;

  static constexpr Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
  static constexpr Jet2 variable_u(double u) { return {u, 1, 0, 0, 0, 0}; }
  static constexpr Jet2 variable_v(double v) { return {v, 0, 1, 0, 0, 0}; }

  bool is_constant() const { return du == 0 && dv == 0 && duu == 0 && duv == 0 && dvv == 0; }
};

// Chain rule for a scalar function f with f(g), f'(g), f''(g) already known.
inline Jet2 compose(const Jet2& g, double f0, double f1, double f2) {
  return {f0,
          f1 * g.du,
          f1 * g.dv,
          f2 * g.du * g.du + f1 * g.duu,
          f2 * g.du * g.dv + f1 * g.duv,
          f2 * g.dv * g.dv + f1 * g.dvv};
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.du + b.du, a.dv + b.dv, a.duu + b.duu, a.duv + b.duv, a.dvv + b.dvv};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.du - b.du, a.dv - b.dv, a.duu - b.duu, a.duv - b.duv, a.dvv - b.dvv};
}

inline Jet2 operator-(const Jet2& a) { return {-a.value, -a.du, -a.dv, -a.duu, -a.duv, -a.dvv}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.value * b.value,
          a.du * b.value + a.value * b.du,
          a.dv * b.value + a.value * b.dv,
          a.duu * b.value + 2 * a.du * b.du + a.value * b.duu,
          a.duv * b.value + a.du * b.dv + a.dv * b.du + a.value * b.duv,
          a.dvv * b.value + 2 * a.dv * b.dv + a.value * b.dvv};
}

inline Jet2 operator*(double s, const Jet2& a) {
  return {s * a.value, s * a.du, s * a.dv, s * a.duu, s * a.duv, s * a.dvv};
}

// Caller guarantees b.value != 0.
inline Jet2 reciprocal(const Jet2& b) {
  const double r = 1.0 / b.value;
  return compose(b, r, -r * r, 2 * r * r * r);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

}  // namespace curvmeasure

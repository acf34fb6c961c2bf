#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace curvmeasure {

/// Dormand-Prince 5(4) embedded Runge-Kutta pair on a fixed-size state.
/// `step` attempts one step of size h and returns the 5th-order solution
/// together with a scaled error norm (accept when <= 1).
template <std::size_t N>
class DormandPrince {
public:
  using State = std::array<double, N>;

  DormandPrince(double rtol, double atol) : rtol_(rtol), atol_(atol) {}

  template <class F>
  double step(const F& f, double s, const State& y, double h, State& out) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State k1, k2, k3, k4, k5, k6, k7, tmp;
    f(s, y, k1);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    f(s + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(s + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(s + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(s + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(s + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(s + h, out, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(out[i]));
      err = std::max(err, std::abs(ei) / sc);
    }
    return err;
  }

  /// Step-size update after an attempt with error norm `err`.
  static double next_h(double h, double err) {
    if (err == 0.0) return h * 5.0;
    const double fac = 0.9 * std::pow(err, -0.2);
    return h * std::clamp(fac, 0.2, 5.0);
  }

private:
  double rtol_;
  double atol_;
};

}  // namespace curvmeasure

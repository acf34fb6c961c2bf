#include "curvmeasure/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvmeasure/error.hpp"

namespace curvmeasure {

namespace {

void check_range(int nu, double x) {
  if (nu < 0 || nu > kBesselMaxOrder || !(x >= 0) || x > kBesselMaxArgument)
    throw OutOfValidatedRange("Bessel evaluation outside validated range: nu=" + std::to_string(nu) +
                              ", x=" + std::to_string(x));
}

// Miller's backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalized by
// J_0 + 2 sum J_{2k} = 1. Returns J_{nu-1}, J_nu, J_{nu+1}.
void miller(int nu, double x, double out[3]) {
  const double big = std::max(static_cast<double>(nu + 1), x);
  int start = static_cast<int>(big + 30.0 + 4.0 * std::sqrt(big));
  start += start % 2;
  double jp1 = 0.0, j = 1e-300, norm = 0.0;
  double keep[3] = {0.0, 0.0, 0.0};
  for (int k = start; k >= 1; --k) {
    const double jm1 = (2.0 * k / x) * j - jp1;
    jp1 = j;
    j = jm1;  // now J_{k-1}
    const int order = k - 1;
    if (order > 0 && order % 2 == 0) norm += 2.0 * j;
    if (order == nu - 1) keep[0] = j;
    if (order == nu) keep[1] = j;
    if (order == nu + 1) keep[2] = j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      for (double& q : keep) q *= 1e-250;
    }
  }
  norm += j;  // J_0
  for (int i = 0; i < 3; ++i) out[i] = keep[i] / norm;
  if (nu == 0) out[0] = -out[2];  // J_{-1} = -J_1
}

}  // namespace

double bessel_j(int nu, double x) {
  check_range(nu, x);
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  double j[3];
  miller(nu, x, j);
  return j[1];
}

double bessel_j_deriv(int nu, double x) {
  check_range(nu, x);
  if (x == 0.0) return nu == 1 ? 0.5 : 0.0;
  double j[3];
  miller(nu, x, j);
  return 0.5 * (j[0] - j[2]);
}

std::vector<double> bessel_zeros(int nu, double x_max, bool derivative) {
  check_range(nu, x_max);
  auto f = [&](double x) { return derivative ? bessel_j_deriv(nu, x) : bessel_j(nu, x); };
  std::vector<double> zeros;
  // The first zero of J_nu and of J'_nu (nu >= 1) exceeds nu; consecutive
  // zeros are more than 0.5 apart.
  constexpr double kStep = 0.5;
  double a = nu == 0 ? 1e-3 : static_cast<double>(nu);
  if (a >= x_max) return zeros;
  double fa = f(a);
  while (a < x_max) {
    const double b = std::min(a + kStep, x_max);
    const double fb = f(b);
    if (fa == 0.0) {
      zeros.push_back(a);
    } else if (fa * fb < 0.0) {
      double lo = a, hi = b, flo = fa;
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace curvmeasure

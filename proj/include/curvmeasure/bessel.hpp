#pragma once

#include <vector>

namespace curvmeasure {

/// Largest argument and order for which the Bessel routines are validated.
inline constexpr double kBesselMaxArgument = 400.0;
inline constexpr int kBesselMaxOrder = 400;

/// J_nu(x) for integer nu >= 0 and 0 <= x <= 400, absolute error below 1e-13.
/// Throws OutOfValidatedRange outside that range.
double bessel_j(int nu, double x);

/// J'_nu(x).
double bessel_j_deriv(int nu, double x);

/// All positive zeros of J_nu (or of J'_nu when `derivative`) in (0, x_max],
/// ascending, each bisected to 1e-13.
std::vector<double> bessel_zeros(int nu, double x_max, bool derivative);

}  // namespace curvmeasure

#pragma once

#include <functional>
#include <span>

namespace curvmeasure {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

/// Rules are built once per order (1 <= n <= 64) and shared.
GaussRule gauss_legendre(int n);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  long evaluations = 0;
};

struct QuadOptions {
  double tol = 1e-8;       // absolute
  double rel_tol = 0.0;    // optional relative floor, max(tol, rel_tol*|I|)
  long max_evaluations = 20'000'000;
  int max_depth = 40;
};

/// Adaptive Gauss-Legendre on [a, b]: a panel is accepted when its 10-point
/// estimate and the sum over its halves agree to the panel's share of tol.
/// Throws ToleranceNotMet when the evaluation budget runs out.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadOptions& opt = {});

/// Adaptive tensor Gauss-Legendre on [a, b] x [c, d] with quadtree refinement.
QuadResult integrate_2d(const std::function<double(double, double)>& f, double a, double b,
                        double c, double d, const QuadOptions& opt = {});

}  // namespace curvmeasure

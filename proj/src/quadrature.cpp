#include "curvmeasure/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "curvmeasure/error.hpp"

namespace curvmeasure {

namespace {

constexpr int kMaxOrder = 64;
constexpr int kPanelOrder = 10;

struct RuleTable {
  std::array<std::vector<double>, kMaxOrder + 1> nodes;
  std::array<std::vector<double>, kMaxOrder + 1> weights;

  RuleTable() {
    for (int n = 1; n <= kMaxOrder; ++n) {
      auto& x = nodes[static_cast<std::size_t>(n)];
      auto& w = weights[static_cast<std::size_t>(n)];
      x.resize(static_cast<std::size_t>(n));
      w.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = z;
          for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
          }
          dp = n * (z * p1 - p0) / (z * z - 1.0);
          const double dz = p1 / dp;
          z -= dz;
          if (std::abs(dz) < 1e-16) break;
        }
        // Recompute derivative at the converged node.
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        x[static_cast<std::size_t>(i)] = -z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
      }
    }
  }
};

const RuleTable& rules() {
  static const RuleTable table;
  return table;
}

double panel_1d(const std::function<double(double)>& f, double a, double b, long& evals) {
  const GaussRule r = gauss_legendre(kPanelOrder);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  evals += static_cast<long>(r.nodes.size());
  return s * half;
}

struct Adaptive1D {
  const std::function<double(double)>& f;
  const QuadOptions& opt;
  long evals = 0;
  double error = 0.0;
  bool exhausted = false;

  double run(double a, double b, double coarse, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = panel_1d(f, a, m, evals);
    const double right = panel_1d(f, m, b, evals);
    const double fine = left + right;
    const double diff = std::abs(fine - coarse);
    if (diff <= tol || depth >= opt.max_depth || exhausted) {
      error += diff;
      return fine;
    }
    if (evals > opt.max_evaluations) {
      exhausted = true;
      error += diff;
      return fine;
    }
    return run(a, m, left, 0.5 * tol, depth + 1) + run(m, b, right, 0.5 * tol, depth + 1);
  }
};

double panel_2d(const std::function<double(double, double)>& f, double a, double b, double c,
                double d, long& evals) {
  const GaussRule r = gauss_legendre(kPanelOrder);
  const double mx = 0.5 * (a + b), hx = 0.5 * (b - a);
  const double my = 0.5 * (c + d), hy = 0.5 * (d - c);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double x = mx + hx * r.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < r.nodes.size(); ++j) row += r.weights[j] * f(x, my + hy * r.nodes[j]);
    s += r.weights[i] * row;
  }
  evals += static_cast<long>(r.nodes.size() * r.nodes.size());
  return s * hx * hy;
}

struct Adaptive2D {
  const std::function<double(double, double)>& f;
  const QuadOptions& opt;
  long evals = 0;
  double error = 0.0;
  bool exhausted = false;

  double run(double a, double b, double c, double d, double coarse, double tol, int depth) {
    const double mx = 0.5 * (a + b), my = 0.5 * (c + d);
    const double q[4] = {panel_2d(f, a, mx, c, my, evals), panel_2d(f, mx, b, c, my, evals),
                         panel_2d(f, a, mx, my, d, evals), panel_2d(f, mx, b, my, d, evals)};
    const double fine = q[0] + q[1] + q[2] + q[3];
    const double diff = std::abs(fine - coarse);
    if (diff <= tol || depth >= opt.max_depth || exhausted) {
      error += diff;
      return fine;
    }
    if (evals > opt.max_evaluations) {
      exhausted = true;
      error += diff;
      return fine;
    }
    const double t = 0.25 * tol;
    return run(a, mx, c, my, q[0], t, depth + 1) + run(mx, b, c, my, q[1], t, depth + 1) +
           run(a, mx, my, d, q[2], t, depth + 1) + run(mx, b, my, d, q[3], t, depth + 1);
  }
};

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1 || n > kMaxOrder) throw std::invalid_argument("gauss_legendre: order out of range");
  const auto& t = rules();
  return {t.nodes[static_cast<std::size_t>(n)], t.weights[static_cast<std::size_t>(n)]};
}

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadOptions& opt) {
  if (a == b) return {};
  Adaptive1D q{f, opt};
  const double coarse = panel_1d(f, a, b, q.evals);
  const double tol = std::max(opt.tol, opt.rel_tol * std::abs(coarse));
  const double value = q.run(a, b, coarse, tol, 0);
  if (q.exhausted || q.error > tol) throw ToleranceNotMet(value, q.error);
  return {value, q.error, q.evals};
}

QuadResult integrate_2d(const std::function<double(double, double)>& f, double a, double b,
                        double c, double d, const QuadOptions& opt) {
  if (a == b || c == d) return {};
  Adaptive2D q{f, opt};
  const double coarse = panel_2d(f, a, b, c, d, q.evals);
  const double tol = std::max(opt.tol, opt.rel_tol * std::abs(coarse));
  const double value = q.run(a, b, c, d, coarse, tol, 0);
  if (q.exhausted || q.error > tol) throw ToleranceNotMet(value, q.error);
  return {value, q.error, q.evals};
}

}  // namespace curvmeasure

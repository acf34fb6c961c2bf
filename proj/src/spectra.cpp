#include "curvmeasure/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "curvmeasure/bessel.hpp"
#include "curvmeasure/curvature.hpp"
#include "curvmeasure/parallel.hpp"

namespace curvmeasure {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

void sort_spectrum(std::vector<double>& v) { std::sort(v.begin(), v.end()); }

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- domains

DomainSpec DomainSpec::parse(const std::string& name, const std::vector<double>& size) {
  auto need = [&](std::size_t n) {
    if (size.size() != n)
      throw ValidationError("size", name + " takes " + std::to_string(n) + " size value(s)");
    for (double s : size)
      if (!(s > 0) || !std::isfinite(s)) throw ValidationError("size", "sizes must be positive");
  };
  if (name == "square") {
    if (size.empty()) return square();
    need(1);
    return square(size[0]);
  }
  if (name == "rectangle") {
    need(2);
    return rectangle(size[0], size[1]);
  }
  const DomainSpec base = name == "equilateral"       ? equilateral()
                          : name == "isosceles-right" ? isosceles_right()
                          : name == "disc"            ? disc()
                                                      : DomainSpec{Shape::Rectangle, 0, 0};
  if (base.a == 0)
    throw ValidationError("domain", "unknown domain '" + name +
                                        "' (square, rectangle, equilateral, isosceles-right, disc)");
  if (size.empty()) return base;
  need(1);
  return {base.shape, size[0], size[0]};
}

std::string DomainSpec::name() const {
  switch (shape) {
    case Shape::Rectangle:
      return a == b ? "square" : "rectangle";
    case Shape::Equilateral:
      return "equilateral";
    case Shape::IsoscelesRight:
      return "isosceles-right";
    case Shape::Disc:
      return "disc";
  }
  return "";
}

double DomainSpec::area() const {
  switch (shape) {
    case Shape::Rectangle:
      return a * b;
    case Shape::Equilateral:
      return std::sqrt(3.0) / 4.0 * a * a;
    case Shape::IsoscelesRight:
      return 0.5 * a * a;
    case Shape::Disc:
      return kPi * a * a;
  }
  return 0.0;
}

double DomainSpec::perimeter() const {
  switch (shape) {
    case Shape::Rectangle:
      return 2 * (a + b);
    case Shape::Equilateral:
      return 3 * a;
    case Shape::IsoscelesRight:
      return (2 + std::numbers::sqrt2) * a;
    case Shape::Disc:
      return 2 * kPi * a;
  }
  return 0.0;
}

BoundaryCondition parse_boundary_condition(const std::string& s) {
  if (s == "dirichlet") return BoundaryCondition::Dirichlet;
  if (s == "neumann") return BoundaryCondition::Neumann;
  if (s == "double") return BoundaryCondition::Double;
  throw ValidationError("bc", "unknown boundary condition '" + s + "' (dirichlet, neumann, double)");
}

std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Dirichlet:
      return "dirichlet";
    case BoundaryCondition::Neumann:
      return "neumann";
    case BoundaryCondition::Double:
      return "double";
  }
  return "";
}

// ---------------------------------------------------------------- enumeration

std::vector<double> rectangle_spectrum(double a, double b, BoundaryCondition bc, double t_max) {
  if (bc == BoundaryCondition::Double) {
    std::vector<double> d = rectangle_spectrum(a, b, BoundaryCondition::Dirichlet, t_max);
    std::vector<double> n = rectangle_spectrum(a, b, BoundaryCondition::Neumann, t_max);
    std::vector<double> out(d.size() + n.size());
    std::merge(d.begin(), d.end(), n.begin(), n.end(), out.begin());
    return out;
  }
  std::vector<double> out;
  if (t_max < 0) return out;
  const long first = bc == BoundaryCondition::Dirichlet ? 1 : 0;
  const double ia = 1.0 / (a * a), ib = 1.0 / (b * b);
  const long m_max = static_cast<long>(std::floor(a * std::sqrt(t_max) / kPi)) + 1;
  for (long m = first; m <= m_max; ++m) {
    for (long n = first;; ++n) {
      const double lam = kPi2 * (static_cast<double>(m * m) * ia + static_cast<double>(n * n) * ib);
      if (lam > t_max) break;
      out.push_back(lam);
    }
  }
  sort_spectrum(out);
  return out;
}

std::vector<double> triangle_spectrum(Shape kind, double size, BoundaryCondition bc, double t_max) {
  if (bc == BoundaryCondition::Double) {
    std::vector<double> d = triangle_spectrum(kind, size, BoundaryCondition::Dirichlet, t_max);
    std::vector<double> n = triangle_spectrum(kind, size, BoundaryCondition::Neumann, t_max);
    std::vector<double> out(d.size() + n.size());
    std::merge(d.begin(), d.end(), n.begin(), n.end(), out.begin());
    return out;
  }
  if (kind != Shape::Equilateral && kind != Shape::IsoscelesRight)
    throw ValidationError("domain", "triangle_spectrum needs an equilateral or isosceles-right triangle");
  std::vector<double> out;
  if (t_max < 0) return out;
  const bool dir = bc == BoundaryCondition::Dirichlet;
  if (kind == Shape::IsoscelesRight) {
    // Square modes antisymmetric (m > n >= 1) or symmetric (m >= n >= 0)
    // under reflection in the diagonal.
    const double scale = kPi2 / (size * size);
    for (long n = dir ? 1 : 0;; ++n) {
      const long m0 = dir ? n + 1 : n;
      if (scale * static_cast<double>(m0 * m0 + n * n) > t_max) break;
      for (long m = m0;; ++m) {
        const double lam = scale * static_cast<double>(m * m + n * n);
        if (lam > t_max) break;
        out.push_back(lam);
      }
    }
  } else {
    // Lame modes: ordered pairs (m, n), m, n >= 1 (Dirichlet) or >= 0 (Neumann).
    const double scale = 16.0 * kPi2 / (9.0 * size * size);
    const long first = dir ? 1 : 0;
    for (long m = first;; ++m) {
      if (scale * static_cast<double>(m * m + m * first + first * first) > t_max) break;
      for (long n = first;; ++n) {
        const double lam = scale * static_cast<double>(m * m + m * n + n * n);
        if (lam > t_max) break;
        out.push_back(lam);
      }
    }
  }
  sort_spectrum(out);
  return out;
}

std::vector<double> disc_spectrum(double radius, BoundaryCondition bc, double t_max) {
  if (bc == BoundaryCondition::Double) {
    std::vector<double> d = disc_spectrum(radius, BoundaryCondition::Dirichlet, t_max);
    std::vector<double> n = disc_spectrum(radius, BoundaryCondition::Neumann, t_max);
    std::vector<double> out(d.size() + n.size());
    std::merge(d.begin(), d.end(), n.begin(), n.end(), out.begin());
    return out;
  }
  std::vector<double> out;
  if (t_max < 0) return out;
  const bool neumann = bc == BoundaryCondition::Neumann;
  if (neumann) out.push_back(0.0);
  const double x_max = radius * std::sqrt(t_max);
  if (x_max > kBesselMaxArgument)
    throw OutOfValidatedRange("disc spectrum needs Bessel zeros up to " + std::to_string(x_max) +
                              ", beyond the validated range " + std::to_string(kBesselMaxArgument));
  if (x_max == 0.0) return out;
  // Zeros of order nu exceed nu, so orders up to x_max suffice.
  const int nu_max = static_cast<int>(std::floor(x_max));
  std::vector<std::vector<double>> per_order(nu_max + 1);
  parallel_for(per_order.size(), [&](std::size_t nu) {
    per_order[nu] = bessel_zeros(static_cast<int>(nu), x_max, neumann);
  });
  for (std::size_t nu = 0; nu < per_order.size(); ++nu) {
    for (double j : per_order[nu]) {
      const double lam = (j / radius) * (j / radius);
      if (lam > t_max) continue;
      out.push_back(lam);
      if (nu > 0) out.push_back(lam);
    }
  }
  sort_spectrum(out);
  return out;
}

std::vector<double> spectrum(const DomainSpec& d, BoundaryCondition bc, double t_max) {
  switch (d.shape) {
    case Shape::Rectangle:
      return rectangle_spectrum(d.a, d.b, bc, t_max);
    case Shape::Equilateral:
    case Shape::IsoscelesRight:
      return triangle_spectrum(d.shape, d.a, bc, t_max);
    case Shape::Disc:
      return disc_spectrum(d.a, bc, t_max);
  }
  return {};
}

std::vector<double> double_spectrum(const DomainSpec& d, double t_max) {
  return spectrum(d, BoundaryCondition::Double, t_max);
}

std::size_t counting(const std::vector<double>& sorted, double t) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

std::vector<EigenvalueGroup> group_multiplicities(const std::vector<double>& sorted) {
  std::vector<EigenvalueGroup> out;
  for (double v : sorted) {
    if (!out.empty() && out.back().value == v)
      ++out.back().multiplicity;
    else
      out.push_back({v, 1});
  }
  return out;
}

// ---------------------------------------------------------------- doubles

GluedSurface double_surface(const DomainSpec& d) {
  const Expr zero = Expr::constant(0.0);
  std::vector<MetricPatch> patches;
  std::vector<SeamSpec> seams;
  std::vector<ConePointSpec> cones;
  auto t = [](const char* s) { return Expr::parse(s, {"t"}); };
  const Expr phi = Expr::parse("u", {"u"});

  std::vector<BoundaryArc> arcs;
  std::vector<Corner> corners;
  ParamDomain dom;
  Expr E, F, G;
  switch (d.shape) {
    case Shape::Rectangle: {
      dom = ParamDomain::rect(0, d.a, 0, d.b);
      E = G = Expr::constant(1.0);
      F = zero;
      const std::string A = fmt(d.a), B = fmt(d.b);
      arcs = {{"e0", t((A + "*t").c_str()), t("0")},
              {"e1", t(A.c_str()), t((B + "*t").c_str())},
              {"e2", t((A + "*(1-t)").c_str()), t(B.c_str())},
              {"e3", t("0"), t((B + "*(1-t)").c_str())}};
      break;
    }
    case Shape::Equilateral:
    case Shape::IsoscelesRight: {
      dom = ParamDomain::triangle();
      const double s2 = d.a * d.a;
      E = G = Expr::constant(s2);
      F = d.shape == Shape::Equilateral ? Expr::constant(0.5 * s2) : zero;
      arcs = {{"e0", t("t"), t("0")}, {"e1", t("1-t"), t("t")}, {"e2", t("0"), t("1-t")}};
      break;
    }
    case Shape::Disc: {
      dom = ParamDomain::disc();
      E = G = Expr::constant(d.a * d.a);
      F = zero;
      arcs = {{"rim", t("cos(2*pi*t)"), t("sin(2*pi*t)")}};
      break;
    }
  }
  if (arcs.size() > 1)
    for (std::size_t i = 0; i < arcs.size(); ++i) corners.push_back({"c" + std::to_string(i), i});
  patches.emplace_back("A", dom, E, F, G, arcs, corners, 1);
  patches.emplace_back("B", dom, E, F, G, arcs, corners, 1);
  for (const auto& a : arcs) seams.push_back({a.id, {"A", a.id}, {"B", a.id}, phi, Orientation::Preserving});
  for (const auto& c : corners) cones.push_back({c.id, {{"A", c.id, std::nullopt}, {"B", c.id, std::nullopt}}});
  return build(std::move(patches), std::move(seams), std::move(cones));
}

ConstantMode ConstantMode::parse(const std::string& s) {
  if (s == "paper") return {Kind::Paper, 0.0};
  if (s == "corner") return {Kind::Corner, 0.0};
  if (s.rfind("custom:", 0) == 0) {
    const std::string v = s.substr(7);
    try {
      std::size_t used = 0;
      const double c = std::stod(v, &used);
      if (used == v.size() && std::isfinite(c)) return {Kind::Custom, c};
    } catch (const std::exception&) {
    }
    throw ValidationError("constant", "custom constant '" + v + "' is not a number");
  }
  throw ValidationError("constant", "unknown constant mode '" + s + "' (paper, corner, custom:<c>)");
}

std::string ConstantMode::to_string() const {
  switch (kind) {
    case Kind::Paper:
      return "paper";
    case Kind::Corner:
      return "corner";
    case Kind::Custom: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "custom:%.17g", custom);
      return buf;
    }
  }
  return "";
}

double counting_constant(const DomainSpec& d, const ConstantMode& mode) {
  if (mode.kind == ConstantMode::Kind::Custom) return mode.custom;
  const CurvatureMeasure m = compute_curvature_measure(double_surface(d));
  if (mode.kind == ConstantMode::Kind::Paper) return m.total().value;
  double c = (m.ac_total().value + m.seam_total().value) / (12 * kPi);
  for (const auto& cp : m.surface().cone_points()) {
    const double g = cp.angle_sum();
    c += (4 * kPi2 - g * g) / (24 * kPi * g);
  }
  return c;
}

double modified_counting(const DomainSpec& d, double t, const ConstantMode& mode) {
  return 2 * d.area() * t / (4 * kPi) + counting_constant(d, mode);
}

// ---------------------------------------------------------------- averaged error

AverageError::AverageError(std::vector<double> sorted_spectrum, double alpha, double c)
    : spectrum_(std::move(sorted_spectrum)), prefix_(spectrum_.size() + 1, 0.0L), alpha_(alpha), c_(c) {
  // Kahan-compensated running sum.
  long double sum = 0.0L, comp = 0.0L;
  for (std::size_t i = 0; i < spectrum_.size(); ++i) {
    const long double y = static_cast<long double>(spectrum_[i]) - comp;
    const long double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    prefix_[i + 1] = sum;
  }
}

double AverageError::count(double t) const { return static_cast<double>(counting(spectrum_, t)); }

double AverageError::operator()(double t) const {
  const std::size_t k = counting(spectrum_, t);
  const long double T = t;
  const long double v = static_cast<long double>(k) - prefix_[k] / T - 0.5L * alpha_ * T - c_;
  return static_cast<double>(v);
}

// ---------------------------------------------------------------- conjecture

namespace {

// Envelope of |A - c0|: the largest deviation per quarter-decade bin, as
// (log10 t at the bin centre, log10 peak) pairs.
std::vector<std::pair<double, double>> envelope(const std::vector<CountingRow>& rows, double c0, double t_lo,
                                                double t_hi) {
  const double bins_per_decade = 4.0;
  const double lo = std::log10(t_lo);
  const int nbins = std::max(2, static_cast<int>(std::round((std::log10(t_hi) - lo) * bins_per_decade)));
  std::vector<double> peak(nbins, 0.0);
  for (const auto& r : rows) {
    if (r.t < t_lo || r.t > t_hi) continue;
    const int b = std::clamp(static_cast<int>((std::log10(r.t) - lo) * bins_per_decade), 0, nbins - 1);
    peak[b] = std::max(peak[b], std::abs(r.a - c0));
  }
  std::vector<std::pair<double, double>> out;
  for (int b = 0; b < nbins; ++b)
    if (peak[b] > 0) out.emplace_back(lo + (b + 0.5) / bins_per_decade, std::log10(peak[b]));
  return out;
}

// Negated least-squares slope; NaN when the points do not determine one.
double decay_exponent(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (pts.size() < 2 || !(std::abs(den) > 1e-12)) return std::numeric_limits<double>::quiet_NaN();
  return -(n * sxy - sx * sy) / den;
}

}  // namespace

CountingReport conjecture_test(const DomainSpec& d, double t_max, const ConstantMode& mode,
                               const ConjectureOptions& opt) {
  if (!(opt.t_min > 0) || !(t_max > opt.t_min) || t_max / opt.t_min < 100.0)
    throw InsufficientRange("the t-grid must span at least two decades (t_min=" + std::to_string(opt.t_min) +
                            ", t_max=" + std::to_string(t_max) + ")");
  if (opt.grid < 10) throw InsufficientRange("the t-grid needs at least 10 points");

  CountingReport r;
  r.domain = d;
  r.mode = mode;
  r.t_max = t_max;
  r.constant = counting_constant(d, mode);
  const double alpha = 2 * d.area() / (4 * kPi);
  std::vector<double> spec = double_spectrum(d, t_max);
  r.eigenvalue_count = spec.size();
  const AverageError A(std::move(spec), alpha, r.constant);

  const double ratio = std::log(t_max / opt.t_min);
  for (std::size_t i = 0; i < opt.grid; ++i) {
    const double t = i + 1 == opt.grid ? t_max
                                        : opt.t_min * std::exp(ratio * static_cast<double>(i) / (opt.grid - 1));
    const double n = A.count(t);
    const double nt = alpha * t + r.constant;
    r.rows.push_back({t, n, nt, n - nt, A(t)});
  }

  std::vector<double> tail;
  for (const auto& row : r.rows)
    if (row.t >= t_max / 10) tail.push_back(row.a);
  auto mean = [](const std::vector<double>& v) {
    long double s = 0;
    for (double x : v) s += x;
    return static_cast<double>(s / v.size());
  };
  r.c0 = mean(tail);
  double var = 0;
  for (double x : tail) var += (x - r.c0) * (x - r.c0);
  r.tail_std = std::sqrt(var / tail.size());

  r.fit_decades = std::min(3.0, std::log10(t_max / opt.t_min));
  const double t_lo = t_max / std::pow(10.0, r.fit_decades);
  r.p = decay_exponent(envelope(r.rows, r.c0, t_lo, t_max));
  if (!std::isfinite(r.p)) throw InsufficientRange("the envelope of A(t) - c0 does not determine an exponent");

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, tail.size() - 1);
  std::vector<double> c0s, ps;
  std::vector<double> sample(tail.size());
  for (std::size_t b = 0; b < opt.bootstrap; ++b) {
    for (auto& x : sample) x = tail[pick(rng)];
    const double c = mean(sample);
    c0s.push_back(c);
    const auto env = envelope(r.rows, c, t_lo, t_max);
    std::vector<std::pair<double, double>> resampled(env.size());
    if (!env.empty()) {
      std::uniform_int_distribution<std::size_t> bin(0, env.size() - 1);
      for (auto& q : resampled) q = env[bin(rng)];
    }
    const double p = decay_exponent(resampled);
    if (std::isfinite(p)) ps.push_back(p);
  }
  if (!c0s.empty()) {
    const double cm = mean(c0s);
    double v = 0;
    for (double c : c0s) v += (c - cm) * (c - cm);
    r.c0_stderr = std::sqrt(v / std::max<std::size_t>(1, c0s.size() - 1));
  }
  if (!ps.empty()) {
    std::sort(ps.begin(), ps.end());
    const auto q = [&](double f) { return ps[static_cast<std::size_t>(std::round(f * (ps.size() - 1)))]; };
    r.p_lo = std::min(q(0.025), r.p);
    r.p_hi = std::max(q(0.975), r.p);
  } else {
    r.p_lo = r.p_hi = r.p;
  }
  r.quarter_in_interval = r.p_lo <= 0.25 && 0.25 <= r.p_hi;
  r.consistent = r.p >= 0.20;
  r.constant_mismatch = std::abs(r.c0) > 3 * r.tail_std;
  return r;
}

std::vector<ResidualRow> weyl_ivrii_residuals(const DomainSpec& d, BoundaryCondition bc,
                                              const std::vector<double>& t_grid) {
  double t_max = 0;
  for (double t : t_grid) {
    if (!(t > 0)) throw ValidationError("t", "grid values must be positive");
    t_max = std::max(t_max, t);
  }
  const std::vector<double> spec = spectrum(d, bc, t_max);
  const double area = bc == BoundaryCondition::Double ? 2 * d.area() : d.area();
  const double L = d.perimeter();
  std::vector<ResidualRow> rows;
  for (double t : t_grid) {
    const double n = static_cast<double>(counting(spec, t));
    const double bulk = n - area * t / (4 * kPi);
    const double bterm = L * std::sqrt(t) / (4 * kPi);
    double res = bulk;
    if (bc == BoundaryCondition::Dirichlet) res = bulk + bterm;
    if (bc == BoundaryCondition::Neumann) res = bulk - bterm;
    rows.push_back({t, n, res, res / std::sqrt(t), bulk / std::sqrt(t)});
  }
  return rows;
}

}  // namespace curvmeasure

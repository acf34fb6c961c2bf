#include "curvmeasure/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvmeasure/ode.hpp"

namespace curvmeasure {

namespace {

constexpr double kPi = std::numbers::pi;

double det3(const double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::string fmt_point(Vec2 p) {
  return "(" + std::to_string(p.u) + ", " + std::to_string(p.v) + ")";
}

}  // namespace

// ---------------------------------------------------------------- domain

ParamDomain ParamDomain::rect(double u0, double u1, double v0, double v1) {
  return {DomainKind::Rect, u0, u1, v0, v1};
}

ParamDomain ParamDomain::disc() { return {DomainKind::Disc, -1, 1, -1, 1}; }

ParamDomain ParamDomain::triangle() { return {DomainKind::Triangle, 0, 1, 0, 1}; }

double ParamDomain::level(Vec2 p) const {
  switch (kind) {
    case DomainKind::Rect:
      return std::min({p.u - u0, u1 - p.u, p.v - v0, v1 - p.v});
    case DomainKind::Disc:
      return 1.0 - std::hypot(p.u, p.v);
    case DomainKind::Triangle:
      return std::min({p.u, p.v, (1.0 - p.u - p.v) / std::numbers::sqrt2});
  }
  return 0.0;
}

double ParamDomain::parameter_area() const {
  switch (kind) {
    case DomainKind::Rect:
      return (u1 - u0) * (v1 - v0);
    case DomainKind::Disc:
      return kPi;
    case DomainKind::Triangle:
      return 0.5;
  }
  return 0.0;
}

Vec2 ParamDomain::canonical(double s1, double s2, double* jacobian) const {
  switch (kind) {
    case DomainKind::Rect:
      if (jacobian) *jacobian = (u1 - u0) * (v1 - v0);
      return {u0 + s1 * (u1 - u0), v0 + s2 * (v1 - v0)};
    case DomainKind::Disc: {
      const double a = 2 * kPi * s2;
      if (jacobian) *jacobian = 2 * kPi * s1;
      return {s1 * std::cos(a), s1 * std::sin(a)};
    }
    case DomainKind::Triangle:
      if (jacobian) *jacobian = s1;
      return {s1 * (1 - s2), s1 * s2};
  }
  return {};
}

// ---------------------------------------------------------------- arcs

Vec2 BoundaryArc::tangent(double t) const {
  return {u.eval_jet2(t).du, v.eval_jet2(t).du};
}

Vec2 BoundaryArc::acceleration(double t) const {
  return {u.eval_jet2(t).duu, v.eval_jet2(t).duu};
}

// ---------------------------------------------------------------- patch

MetricPatch::MetricPatch(std::string id, ParamDomain domain, Expr E, Expr F, Expr G,
                         std::vector<BoundaryArc> boundary, std::vector<Corner> corners, int chi)
    : id_(std::move(id)),
      domain_(domain),
      E_(std::move(E)),
      F_(std::move(F)),
      G_(std::move(G)),
      boundary_(std::move(boundary)),
      corners_(std::move(corners)),
      chi_(chi) {}

std::optional<std::size_t> MetricPatch::arc_index(const std::string& arc_id) const {
  for (std::size_t i = 0; i < boundary_.size(); ++i)
    if (boundary_[i].id == arc_id) return i;
  return std::nullopt;
}

std::optional<std::size_t> MetricPatch::corner_vertex(const std::string& corner_id) const {
  for (const auto& c : corners_)
    if (c.id == corner_id) return c.vertex;
  return std::nullopt;
}

MetricValue MetricPatch::metric(Vec2 p) const {
  return {E_.eval(p.u, p.v), F_.eval(p.u, p.v), G_.eval(p.u, p.v)};
}

MetricJets MetricPatch::jets(Vec2 p) const {
  return {E_.eval_jet2(p.u, p.v), F_.eval_jet2(p.u, p.v), G_.eval_jet2(p.u, p.v)};
}

Christoffel MetricPatch::christoffel(Vec2 p) const {
  const MetricJets j = jets(p);
  const double E = j.E.value, F = j.F.value, G = j.G.value;
  const double D = E * G - F * F;
  if (!(D > 0)) throw DegenerateMetric(p.u, p.v, D);
  const double Eu = j.E.du, Ev = j.E.dv, Fu = j.F.du, Fv = j.F.dv, Gu = j.G.du, Gv = j.G.dv;
  const double s = 1.0 / (2 * D);
  Christoffel c{};
  c.g[0][0][0] = (G * Eu - 2 * F * Fu + F * Ev) * s;
  c.g[1][0][0] = (2 * E * Fu - E * Ev - F * Eu) * s;
  c.g[0][0][1] = c.g[0][1][0] = (G * Ev - F * Gu) * s;
  c.g[1][0][1] = c.g[1][1][0] = (E * Gu - F * Ev) * s;
  c.g[0][1][1] = (2 * G * Fv - G * Gu - F * Gv) * s;
  c.g[1][1][1] = (E * Gv - 2 * F * Fv + F * Gu) * s;
  return c;
}

double MetricPatch::dot(Vec2 at, Vec2 a, Vec2 b) const {
  const MetricValue g = metric(at);
  return g.E * a.u * b.u + g.F * (a.u * b.v + a.v * b.u) + g.G * a.v * b.v;
}

double MetricPatch::norm(Vec2 at, Vec2 a) const { return std::sqrt(std::max(0.0, dot(at, a, a))); }

double MetricPatch::area_form(Vec2 at, Vec2 a, Vec2 b) const {
  const MetricValue g = metric(at);
  return std::sqrt(std::max(0.0, g.det())) * (a.u * b.v - a.v * b.u);
}

double MetricPatch::speed(const BoundaryArc& arc, double t) const {
  return norm(arc.point(t), arc.tangent(t));
}

Vec2 MetricPatch::inward_normal(const BoundaryArc& arc, double t) const {
  const Vec2 at = arc.point(t);
  const Vec2 T = arc.tangent(t);
  const MetricValue g = metric(at);
  const double D = g.det();
  if (!(D > 0)) throw DegenerateMetric(at.u, at.v, D);
  const double len = norm(at, T);
  if (len < 1e-300) throw DegenerateCurve(t);
  const Vec2 n{-(g.F * T.u + g.G * T.v), g.E * T.u + g.F * T.v};
  return (1.0 / (std::sqrt(D) * len)) * n;
}

double MetricPatch::interior_angle(std::size_t vertex) const {
  const std::size_t n = boundary_.size();
  const BoundaryArc& out = boundary_[vertex % n];
  const BoundaryArc& in = boundary_[(vertex + n - 1) % n];
  const Vec2 at = out.point(0.0);
  const Vec2 t_in = in.tangent(1.0);
  const Vec2 t_out = out.tangent(0.0);
  if (norm(at, t_in) == 0 || norm(at, t_out) == 0) throw ZeroVector();
  const double turn = std::atan2(area_form(at, t_in, t_out), dot(at, t_in, t_out));
  return kPi - turn;
}

std::vector<Violation> MetricPatch::validate(const std::string& path) const {
  std::vector<Violation> out;
  auto add = [&](const std::string& where, const std::string& msg) { out.push_back({where, msg}); };

  // Positive definiteness on interior cell centers of the canonical square.
  constexpr int kGrid = 12;
  bool metric_ok = true;
  for (int i = 0; i < kGrid && metric_ok; ++i) {
    for (int j = 0; j < kGrid && metric_ok; ++j) {
      const Vec2 p = domain_.canonical((i + 0.5) / kGrid, (j + 0.5) / kGrid);
      try {
        const MetricValue g = metric(p);
        if (!(g.E > 1e-12 && g.G > 1e-12 && g.det() > 1e-12)) {
          add(path + ".metric", "not positive definite at " + fmt_point(p));
          metric_ok = false;
        }
      } catch (const Error& e) {
        add(path + ".metric", std::string("cannot evaluate at ") + fmt_point(p) + ": " + e.what());
        metric_ok = false;
      }
    }
  }

  if (boundary_.empty()) {
    add(path + ".boundary", "patch has no boundary arcs");
    return out;
  }

  constexpr int kSamples = 64;
  double shoelace = 0.0;
  bool arcs_ok = true;
  for (std::size_t a = 0; a < boundary_.size(); ++a) {
    const BoundaryArc& arc = boundary_[a];
    const std::string where = path + ".boundary[" + std::to_string(a) + "]";
    try {
      Vec2 prev = arc.point(0.0);
      for (int k = 0; k <= kSamples; ++k) {
        const double t = static_cast<double>(k) / kSamples;
        const Vec2 p = arc.point(t);
        if (std::abs(domain_.level(p)) > 1e-9) {
          add(where + ".curve", "point " + fmt_point(p) + " at t=" + std::to_string(t) +
                                    " is not on the domain boundary");
          arcs_ok = false;
          break;
        }
        if (metric_ok && speed(arc, t) < 1e-9) {
          add(where + ".curve", "metric speed below 1e-9 at t=" + std::to_string(t));
          arcs_ok = false;
          break;
        }
        if (k > 0) shoelace += prev.u * p.v - p.u * prev.v;
        prev = p;
      }
    } catch (const Error& e) {
      add(where + ".curve", e.what());
      arcs_ok = false;
    }
    const BoundaryArc& next = boundary_[(a + 1) % boundary_.size()];
    try {
      const Vec2 end = arc.point(1.0);
      const Vec2 start = next.point(0.0);
      if (std::hypot(end.u - start.u, end.v - start.v) > 1e-9) {
        add(where, "end point " + fmt_point(end) + " does not meet the start of arc '" + next.id +
                       "' at " + fmt_point(start));
        arcs_ok = false;
      }
    } catch (const Error&) {
    }
  }
  if (arcs_ok) {
    const double enclosed = 0.5 * shoelace;
    const double expected = domain_.parameter_area();
    if (std::abs(enclosed - expected) > 0.01 * expected)
      add(path + ".boundary", "arcs must traverse the domain boundary once counterclockwise "
                              "(enclosed parameter area " + std::to_string(enclosed) +
                              ", expected " + std::to_string(expected) + ")");
  }

  for (std::size_t i = 0; i < corners_.size(); ++i) {
    const std::string where = path + ".corners[" + std::to_string(i) + "]";
    if (corners_[i].vertex >= boundary_.size()) add(where, "corner vertex out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (corners_[j].id == corners_[i].id) add(where, "duplicate corner id '" + corners_[i].id + "'");
      if (corners_[j].vertex == corners_[i].vertex)
        add(where, "two corner markers on the same vertex");
    }
  }
  return out;
}

// ---------------------------------------------------------------- operations

double gaussian_curvature(const MetricPatch& p, double u, double v) {
  const MetricJets j = p.jets({u, v});
  const double E = j.E.value, F = j.F.value, G = j.G.value;
  const double D = E * G - F * F;
  if (!(D > 0)) throw DegenerateMetric(u, v, D);
  const double A[3][3] = {
      {-0.5 * j.E.dvv + j.F.duv - 0.5 * j.G.duu, 0.5 * j.E.du, j.F.du - 0.5 * j.E.dv},
      {j.F.dv - 0.5 * j.G.du, E, F},
      {0.5 * j.G.dv, F, G},
  };
  const double B[3][3] = {
      {0.0, 0.5 * j.E.dv, 0.5 * j.G.du},
      {0.5 * j.E.dv, E, F},
      {0.5 * j.G.du, F, G},
  };
  return (det3(A) - det3(B)) / (D * D);
}

double geodesic_curvature(const MetricPatch& p, const BoundaryArc& arc, double t) {
  const Vec2 c = arc.point(t);
  const Vec2 d1 = arc.tangent(t);
  const Vec2 d2 = arc.acceleration(t);
  const double len = p.norm(c, d1);
  if (len < 1e-12) throw DegenerateCurve(t);
  const Christoffel g = p.christoffel(c);
  const double x[2] = {d1.u, d1.v};
  Vec2 acc = d2;
  double cov[2] = {acc.u, acc.v};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int jj = 0; jj < 2; ++jj) cov[k] += g.g[k][i][jj] * x[i] * x[jj];
  return p.area_form(c, d1, {cov[0], cov[1]}) / (len * len * len);
}

double angle_between(const MetricPatch& p, Vec2 at, Vec2 w1, Vec2 w2) {
  const double n1 = p.norm(at, w1);
  const double n2 = p.norm(at, w2);
  if (n1 == 0.0 || n2 == 0.0) throw ZeroVector();
  return std::atan2(std::abs(p.area_form(at, w1, w2)), p.dot(at, w1, w2));
}

// ---------------------------------------------------------------- geodesics

namespace {

// State: u, v, du, dv, J, dJ, integral of J.
using GeoState = std::array<double, 7>;

struct GeodesicRhs {
  const MetricPatch& patch;
  bool jacobi;

  void operator()(double, const GeoState& y, GeoState& dy) const {
    const Vec2 at{y[0], y[1]};
    const Christoffel c = patch.christoffel(at);
    const double x[2] = {y[2], y[3]};
    dy[0] = y[2];
    dy[1] = y[3];
    for (int k = 0; k < 2; ++k) {
      double a = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a -= c.g[k][i][j] * x[i] * x[j];
      dy[2 + k] = a;
    }
    if (jacobi) {
      const double K = gaussian_curvature(patch, at.u, at.v);
      dy[4] = y[5];
      dy[5] = -K * y[4];
      dy[6] = y[4];
    } else {
      dy[4] = dy[5] = dy[6] = 0.0;
    }
  }
};

struct TraceResult {
  bool exited = false;
  double length = 0.0;
  GeoState state{};
};

// Integrates from s = 0 to `length`, stopping exactly at each requested
// sample length and at the first boundary crossing (when `stop_at_exit`).
TraceResult integrate_geodesic(const MetricPatch& p, const GeoState& y0, double length,
                               bool jacobi, double rtol, double atol, double exit_tol,
                               const std::vector<double>& stops,
                               std::vector<GeodesicSample>* samples) {
  const GeodesicRhs rhs{p, jacobi};
  const DormandPrince<7> dp(rtol, atol);
  GeoState y = y0;
  double s = 0.0;
  double h = std::min(length, 0.01) * 0.5;
  if (h <= 0) h = 1e-3;
  std::size_t next_stop = 0;
  auto record = [&](double at, const GeoState& st) {
    if (samples) samples->push_back({at, {st[0], st[1]}, {st[2], st[3]}});
  };
  record(0.0, y);
  while (next_stop < stops.size() && stops[next_stop] <= 0.0) ++next_stop;

  int guard = 0;
  while (s < length) {
    if (++guard > 2'000'000) throw ConvergenceFailure("geodesic integration did not terminate");
    double target = length;
    if (next_stop < stops.size()) target = std::min(target, stops[next_stop]);
    bool clipped = false;
    double step = h;
    if (s + step >= target) {
      step = target - s;
      clipped = true;
    }
    GeoState y1;
    double err;
    try {
      err = dp.step(rhs, s, y, step, y1);
    } catch (const NumericalError&) {
      // A stage left the region where the metric is defined; shrink.
      err = 1e10;
    }
    if (!(err <= 1.0)) {
      h = step * 0.25;
      if (h < 1e-14 * std::max(1.0, length))
        throw ConvergenceFailure("geodesic step size underflow at s=" + std::to_string(s));
      continue;
    }
    if (p.domain().level({y1[0], y1[1]}) < -exit_tol) {
      // Locate the crossing inside the accepted step by bisection on a
      // re-taken partial step.
      double lo = 0.0, hi = 1.0;
      GeoState ylo = y;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        GeoState ym;
        dp.step(rhs, s, y, mid * step, ym);
        if (p.domain().level({ym[0], ym[1]}) < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          ylo = ym;
        }
      }
      TraceResult r;
      r.exited = true;
      r.length = s + lo * step;
      r.state = ylo;
      record(r.length, ylo);
      return r;
    }
    s = clipped ? target : s + step;
    y = y1;
    if (clipped && next_stop < stops.size() && target == stops[next_stop]) ++next_stop;
    record(s, y);
    if (!clipped) h = DormandPrince<7>::next_h(step, err);
  }
  return {false, length, y};
}

GeoState initial_state(const MetricPatch& p, Vec2 start, Vec2 direction) {
  const double n = p.norm(start, direction);
  if (!(n > 0)) throw ZeroVector();
  return {start.u, start.v, direction.u / n, direction.v / n, 0.0, 1.0, 0.0};
}

}  // namespace

const GeodesicSample& GeodesicPath::at(double s) const {
  for (const auto& smp : samples)
    if (smp.s == s) return smp;
  throw std::out_of_range("no geodesic sample at requested length");
}

double GeodesicPath::max_speed_deviation(const MetricPatch& p) const {
  double dev = 0.0;
  for (const auto& smp : samples) dev = std::max(dev, std::abs(p.norm(smp.position, smp.velocity) - 1.0));
  return dev;
}

GeodesicPath shoot_geodesic(const MetricPatch& p, Vec2 start, Vec2 direction, double length,
                            const GeodesicOptions& opt) {
  const GeoState y0 = initial_state(p, start, direction);
  std::vector<double> stops = opt.sample_lengths;
  std::sort(stops.begin(), stops.end());
  GeodesicPath path;
  const TraceResult r = integrate_geodesic(p, y0, length, false, opt.rtol, opt.atol, opt.exit_tol,
                                           stops, &path.samples);
  if (r.exited) throw LeftDomain(r.length);
  path.length = length;
  return path;
}

RayTrace trace_ray(const MetricPatch& p, Vec2 start, Vec2 unit_direction, double max_length,
                   double rtol, double exit_tol) {
  const GeoState y0 = initial_state(p, start, unit_direction);
  const TraceResult r =
      integrate_geodesic(p, y0, max_length, true, rtol, rtol * 1e-2, exit_tol, {}, nullptr);
  return {r.exited, r.length, r.state[6], {r.state[0], r.state[1]}};
}

// ---------------------------------------------------------------- quadrature

QuadResult integrate_area(const MetricPatch& p, const AreaIntegrand& f, CanonicalRect region,
                          double tol) {
  const auto integrand = [&](double s1, double s2) {
    double jac = 0.0;
    const Vec2 q = p.domain().canonical(s1, s2, &jac);
    if (jac == 0.0) return 0.0;
    const MetricValue g = p.metric(q);
    const double D = g.det();
    if (D < 0) throw DegenerateMetric(q.u, q.v, D);
    return f(q.u, q.v) * std::sqrt(D) * std::abs(jac);
  };
  QuadOptions opt;
  opt.tol = tol;
  return integrate_2d(integrand, region.s1a, region.s1b, region.s2a, region.s2b, opt);
}

QuadResult integrate_boundary(const MetricPatch& p, const BoundaryArc& arc,
                              const std::function<double(double t)>& f, double t0, double t1,
                              double tol) {
  QuadOptions opt;
  opt.tol = tol;
  return integrate_1d([&](double t) { return f(t) * p.speed(arc, t); }, t0, t1, opt);
}

}  // namespace curvmeasure

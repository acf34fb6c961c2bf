#include "curvmeasure/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvmeasure/parallel.hpp"

namespace curvmeasure {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * kPi;

std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

QuadResult integrate_seam(const CurvatureMeasure& m, std::size_t seam, double t0, double t1,
                          double tol) {
  QuadOptions opt;
  opt.tol = tol;
  return integrate_1d([&](double t) { return m.seam_density(seam, t); }, t0, t1, opt);
}

}  // namespace

// ---------------------------------------------------------------- regions

Region Region::all(const GluedSurface& s) {
  Region r;
  for (std::size_t i = 0; i < s.patches().size(); ++i) r.patches.push_back({i, {}});
  for (std::size_t i = 0; i < s.seams().size(); ++i) r.seams.push_back({i, 0.0, 1.0});
  for (std::size_t i = 0; i < s.cone_points().size(); ++i) r.cones.push_back(i);
  return r;
}

std::vector<Violation> Region::validate(const GluedSurface& s) const {
  std::vector<Violation> bad;
  auto unit = [](double a, double b) { return 0.0 <= a && a <= b && b <= 1.0; };
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const auto& p = patches[i];
    if (p.patch >= s.patches().size()) bad.push_back({idx("region.patches", i), "patch index out of range"});
    if (!unit(p.rect.s1a, p.rect.s1b) || !unit(p.rect.s2a, p.rect.s2b))
      bad.push_back({idx("region.patches", i), "sub-rectangle must lie in [0,1]^2 with a <= b"});
  }
  for (std::size_t i = 0; i < seams.size(); ++i) {
    if (seams[i].seam >= s.seams().size()) bad.push_back({idx("region.seams", i), "seam index out of range"});
    if (!unit(seams[i].t0, seams[i].t1))
      bad.push_back({idx("region.seams", i), "sub-interval must lie in [0,1] with t0 <= t1"});
  }
  for (std::size_t i = 0; i < cones.size(); ++i)
    if (cones[i] >= s.cone_points().size()) bad.push_back({idx("region.cones", i), "cone index out of range"});
  return bad;
}

// ---------------------------------------------------------------- measure

CurvatureMeasure::CurvatureMeasure(GluedSurface s, double tol) : surface_(std::move(s)) {
  for (const auto& c : surface_.cone_points()) atoms_.push_back({c.id, c.mass()});
  const std::size_t np = surface_.patches().size();
  const std::size_t ns = surface_.seams().size();
  patch_totals_.resize(np);
  seam_totals_.resize(ns);
  parallel_for(np + ns, [&](std::size_t k) {
    if (k < np) {
      const MetricPatch& p = surface_.patches()[k];
      const QuadResult q = integrate_area(
          p, [&](double u, double v) { return gaussian_curvature(p, u, v); }, {}, tol);
      patch_totals_[k] = {q.value, q.error};
    } else {
      const QuadResult q = integrate_seam(*this, k - np, 0.0, 1.0, tol);
      seam_totals_[k - np] = {q.value, q.error};
    }
  });
}

double CurvatureMeasure::density(std::size_t patch, double u, double v) const {
  return gaussian_curvature(surface_.patches().at(patch), u, v);
}

double CurvatureMeasure::seam_density(std::size_t seam, double t) const {
  const SeamPoint sp = seam_point(surface_, seam, t);
  return sp.kappa1 * sp.speed1 + sp.kappa2 * sp.speed2;
}

PartTotal CurvatureMeasure::ac_total() const {
  PartTotal t;
  for (const auto& p : patch_totals_) {
    t.value += p.value;
    t.error += p.error;
  }
  return t;
}

PartTotal CurvatureMeasure::seam_total() const {
  PartTotal t;
  for (const auto& p : seam_totals_) {
    t.value += p.value;
    t.error += p.error;
  }
  return t;
}

double CurvatureMeasure::atom_total() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

PartTotal CurvatureMeasure::total() const {
  const PartTotal a = ac_total(), s = seam_total();
  return {a.value + s.value + atom_total(), a.error + s.error};
}

CurvatureMeasure compute_curvature_measure(const GluedSurface& s, double tol) {
  return CurvatureMeasure(s, tol);
}

MeasureValue measure_of(const CurvatureMeasure& m, const Region& r, double tol) {
  if (auto bad = r.validate(m.surface()); !bad.empty()) throw ValidationError(std::move(bad));
  const std::size_t parts = std::max<std::size_t>(1, r.patches.size() + r.seams.size());
  const double share = tol / static_cast<double>(parts);
  MeasureValue out;
  for (const auto& pp : r.patches) {
    const MetricPatch& p = m.surface().patches()[pp.patch];
    const QuadResult q = integrate_area(
        p, [&](double u, double v) { return gaussian_curvature(p, u, v); }, pp.rect, share);
    out.ac += q.value;
    out.error += q.error;
  }
  for (const auto& sp : r.seams) {
    if (sp.t1 <= sp.t0) continue;
    const QuadResult q = integrate_seam(m, sp.seam, sp.t0, sp.t1, share);
    out.seam += q.value;
    out.error += q.error;
  }
  std::vector<std::size_t> cones = r.cones;
  std::sort(cones.begin(), cones.end());
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
  for (std::size_t c : cones) out.atoms += m.atoms()[c].mass;
  out.total = out.ac + out.seam + out.atoms;
  return out;
}

GaussBonnetReport verify_gauss_bonnet(const CurvatureMeasure& m, double tol) {
  const GluedSurface& s = m.surface();
  GaussBonnetReport r;
  const PartTotal ac = m.ac_total(), seam = m.seam_total();
  r.ac = ac.value;
  r.seam = seam.value;
  r.atoms = m.atom_total();
  r.total = r.ac + r.seam + r.atoms;
  r.error_bound = ac.error + seam.error;
  r.chi = s.euler_characteristic();
  r.closed = s.closed();
  for (const auto& fa : s.free_boundary()) {
    const MetricPatch& p = s.patches()[fa.patch];
    const BoundaryArc& arc = p.boundary()[fa.arc];
    const QuadResult q =
        integrate_boundary(p, arc, [&](double t) { return geodesic_curvature(p, arc, t); }, 0.0, 1.0, 1e-10);
    r.boundary_term += q.value;
    r.error_bound += q.error;
  }
  for (const auto& bj : s.boundary_junctions()) r.boundary_term += kPi - bj.angle_sum();
  r.target = kTwoPi * r.chi - r.boundary_term;
  r.defect = std::abs(r.total - r.target);
  r.tol = tol;
  r.pass = r.defect <= tol;
  return r;
}

// ---------------------------------------------------------------- quadrilaterals

namespace {

GeodesicOptions sampled(double length, std::initializer_list<int> orders) {
  GeodesicOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  for (int n : orders) {
    const GaussRule g = gauss_legendre(n);
    for (double x : g.nodes) opt.sample_lengths.push_back(0.5 * (x + 1.0) * length);
  }
  return opt;
}

constexpr int kCoarse = 24;
constexpr int kFine = 32;

// Geodesic from p whose initial velocity w (with |w|_g = length) ends at q.
GeodesicPath connect(const MetricPatch& P, Vec2 p, Vec2 q, double& miss) {
  GeodesicOptions plain;
  plain.rtol = 1e-12;
  plain.atol = 1e-14;
  auto endpoint = [&](Vec2 w) {
    const double len = P.norm(p, w);
    return shoot_geodesic(P, p, w, len, plain).end().position;
  };
  auto size = [](Vec2 a) { return std::max(std::abs(a.u), std::abs(a.v)); };

  Vec2 w = q - p;
  Vec2 res = endpoint(w) - q;
  for (int it = 0; it < 40 && size(res) > 1e-13; ++it) {
    const double d = 1e-7 * std::max(size(w), 1e-3);
    const Vec2 fu = (1.0 / d) * (endpoint(w + Vec2{d, 0.0}) - q - res);
    const Vec2 fv = (1.0 / d) * (endpoint(w + Vec2{0.0, d}) - q - res);
    const double det = fu.u * fv.v - fv.u * fu.v;
    if (det == 0.0) break;
    const Vec2 step{(fv.v * res.u - fv.u * res.v) / det, (-fu.v * res.u + fu.u * res.v) / det};
    double lambda = 1.0;
    Vec2 trial_w, trial_res;
    bool improved = false;
    for (int k = 0; k < 12; ++k, lambda *= 0.5) {
      trial_w = w - lambda * step;
      try {
        trial_res = endpoint(trial_w) - q;
      } catch (const LeftDomain&) {
        continue;
      }
      if (size(trial_res) < size(res)) {
        improved = true;
        break;
      }
    }
    if (!improved) break;
    w = trial_w;
    res = trial_res;
  }
  miss = size(res);
  if (miss > 1e-7) throw NoConnectingGeodesic(miss);
  const double len = P.norm(p, w);
  return shoot_geodesic(P, p, w, len, sampled(len, {kCoarse, kFine}));
}

QuadSide quad_side(const MetricPatch& P, const BoundaryArc& arc, double tx, double ty, double hx,
                   double hy) {
  QuadSide out;
  const Vec2 x = arc.point(tx), y = arc.point(ty);
  const GeodesicPath Lx = shoot_geodesic(P, x, P.inward_normal(arc, tx), hx, sampled(hx, {kCoarse, kFine}));
  const GeodesicPath Ly = shoot_geodesic(P, y, P.inward_normal(arc, ty), hy, sampled(hy, {kCoarse, kFine}));
  const Vec2 p = Lx.end().position, q = Ly.end().position;
  const GeodesicPath L = connect(P, p, q, out.connect_miss);
  out.connect_length = L.length;
  out.a_x = angle_between(P, p, -1.0 * Lx.end().velocity, L.samples.front().velocity);
  out.a_y = angle_between(P, q, -1.0 * Ly.end().velocity, -1.0 * L.end().velocity);

  const QuadResult nu = integrate_boundary(
      P, arc, [&](double t) { return geodesic_curvature(P, arc, t); }, std::min(tx, ty),
      std::max(tx, ty), 1e-12);
  out.nu = nu.value;

  // Coons patch spanned by the seam arc, the two perpendiculars and L.
  auto mu_with = [&](int n) {
    const GaussRule g = gauss_legendre(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double sg = 0.5 * (g.nodes[i] + 1.0);
      const double ta = tx + sg * (ty - tx);
      const Vec2 B = arc.point(ta), dB = (ty - tx) * arc.tangent(ta);
      const GeodesicSample& T = L.at(sg * L.length);
      const Vec2 dT = L.length * T.velocity;
      for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        const double tg = 0.5 * (g.nodes[j] + 1.0);
        const GeodesicSample& Lc = Lx.at(tg * hx);
        const GeodesicSample& Rc = Ly.at(tg * hy);
        const Vec2 dL = hx * Lc.velocity, dR = hy * Rc.velocity;
        const Vec2 X = (1 - tg) * B + tg * T.position + (1 - sg) * Lc.position + sg * Rc.position -
                       ((1 - sg) * (1 - tg) * x + sg * (1 - tg) * y + (1 - sg) * tg * p + sg * tg * q);
        const Vec2 Xs = (1 - tg) * dB + tg * dT - Lc.position + Rc.position -
                        (-(1 - tg) * x + (1 - tg) * y - tg * p + tg * q);
        const Vec2 Xt = T.position - B + (1 - sg) * dL + sg * dR -
                        (-(1 - sg) * x - sg * y + (1 - sg) * p + sg * q);
        const double jac = std::abs(Xs.u * Xt.v - Xs.v * Xt.u);
        const double D = P.metric(X).det();
        sum += 0.25 * g.weights[i] * g.weights[j] * gaussian_curvature(P, X.u, X.v) * std::sqrt(D) * jac;
      }
    }
    return sum;
  };
  const double coarse = mu_with(kCoarse);
  out.mu = mu_with(kFine);
  out.mu_error = std::abs(out.mu - coarse);
  return out;
}

bool patch_is_flat(const MetricPatch& p) {
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const Vec2 q = p.domain().canonical((i + 0.5) / 8, (j + 0.5) / 8);
      if (std::abs(gaussian_curvature(p, q.u, q.v)) > 1e-12) return false;
    }
  return true;
}

}  // namespace

QuadReport quadrilateral_angle_check(const GluedSurface& s, std::size_t seam_index, double t_x,
                                     double t_y, const std::vector<double>& lengths, double tol) {
  std::vector<Violation> bad;
  if (seam_index >= s.seams().size()) bad.push_back({"seam", "seam index out of range"});
  if (!(t_x >= 0 && t_x <= 1)) bad.push_back({"tx", "must lie in [0, 1]"});
  if (!(t_y >= 0 && t_y <= 1)) bad.push_back({"ty", "must lie in [0, 1]"});
  if (t_x == t_y) bad.push_back({"ty", "must differ from tx"});
  if (lengths.size() != 4) bad.push_back({"lengths", "exactly four perpendicular lengths are required"});
  for (std::size_t i = 0; i < lengths.size(); ++i)
    if (!(lengths[i] > 0)) bad.push_back({idx("lengths", i), "must be positive"});
  if (!bad.empty()) throw ValidationError(std::move(bad));

  const Seam& seam = s.seams()[seam_index];
  const MetricPatch& P1 = s.patches()[seam.patch1];
  const MetricPatch& P2 = s.patches()[seam.patch2];
  const double px = std::clamp(seam.phi.eval(t_x), 0.0, 1.0);
  const double py = std::clamp(seam.phi.eval(t_y), 0.0, 1.0);

  QuadReport r;
  r.side1 = quad_side(P1, P1.boundary()[seam.arc1], t_x, t_y, lengths[0], lengths[1]);
  r.side2 = quad_side(P2, P2.boundary()[seam.arc2], px, py, lengths[2], lengths[3]);
  r.a11 = r.side1.a_x;
  r.a12 = r.side1.a_y;
  r.a21 = r.side2.a_x;
  r.a22 = r.side2.a_y;
  r.angle_value = r.a11 + r.a12 + r.a21 + r.a22 - kTwoPi;
  r.measure_value = r.side1.nu + r.side2.nu + r.side1.mu + r.side2.mu;
  r.defect = std::abs(r.angle_value - r.measure_value);
  r.tol = tol;
  r.pass = r.defect <= tol;
  return r;
}

LengthInvarianceReport length_invariance_check(const GluedSurface& s, std::size_t seam, double t_x,
                                               double t_y, const std::vector<double>& lengths,
                                               double tol, double identity_tol) {
  if (lengths.size() < 2) throw ValidationError("lengths", "at least two perpendicular lengths are required");
  LengthInvarianceReport r;
  r.lengths = lengths;
  r.side1_sums.resize(lengths.size());
  r.side2_sums.resize(lengths.size());
  r.defects.resize(lengths.size());
  parallel_for(lengths.size(), [&](std::size_t i) {
    const double h = lengths[i];
    const QuadReport q = quadrilateral_angle_check(s, seam, t_x, t_y, {h, h, h, h}, identity_tol);
    r.side1_sums[i] = q.a11 + q.a12;
    r.side2_sums[i] = q.a21 + q.a22;
    r.defects[i] = q.defect;
  });
  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  r.spread1 = spread(r.side1_sums);
  r.spread2 = spread(r.side2_sums);
  const Seam& sm = s.seams().at(seam);
  r.flat = patch_is_flat(s.patches()[sm.patch1]) && patch_is_flat(s.patches()[sm.patch2]);
  r.tol = tol;
  bool identity = true;
  for (double d : r.defects) identity = identity && d <= identity_tol;
  r.pass = identity && (!r.flat || (r.spread1 <= tol && r.spread2 <= tol));
  return r;
}

// ---------------------------------------------------------------- disc areas

double boundary_ball_area(const MetricPatch& p, std::size_t arc_index, double t, double r,
                          double tol) {
  const BoundaryArc& arc = p.boundary().at(arc_index);
  const Vec2 x = arc.point(t);
  const Vec2 d = arc.tangent(t);
  const Vec2 T = (1.0 / p.norm(x, d)) * d;
  const Vec2 n = p.inward_normal(arc, t);
  auto ray = [&](double theta) {
    return trace_ray(p, x, std::cos(theta) * T + std::sin(theta) * n, r);
  };

  // The ray length min(r, distance to the boundary) has kinks where the
  // boundary distance crosses r; locate them so each panel is smooth.
  constexpr int kScan = 64;
  std::vector<double> cuts{0.0};
  bool prev = ray(0.0).exited;
  for (int i = 1; i <= kScan; ++i) {
    const double th = kPi * i / kScan;
    const bool cur = ray(th).exited;
    if (cur != prev) {
      double lo = kPi * (i - 1) / kScan, hi = th;
      for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ray(mid).exited == prev ? lo : hi) = mid;
      }
      cuts.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  cuts.push_back(kPi);

  QuadOptions opt;
  opt.tol = tol / static_cast<double>(cuts.size() - 1);
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    area += integrate_1d([&](double th) { return ray(th).jacobi_area; }, cuts[k], cuts[k + 1], opt).value;
  return area;
}

DiscAsymReport disc_area_asymptotics(const GluedSurface& s, std::size_t seam_index, double t,
                                     const std::vector<double>& radii) {
  if (seam_index >= s.seams().size()) throw ValidationError("seam", "seam index out of range");
  if (!(t >= 0 && t <= 1)) throw ValidationError("t", "must lie in [0, 1]");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0)) throw ValidationError(idx("radii", i), "must be positive");
  if (radii.size() < 4) throw FitIllConditioned("at least four radii are needed for the fit");
  const auto [rmin, rmax] = std::minmax_element(radii.begin(), radii.end());
  if (*rmax / *rmin < 1.5) throw FitIllConditioned("radius grid too narrow (rmax/rmin < 1.5)");

  const Seam& seam = s.seams()[seam_index];
  const MetricPatch& P1 = s.patches()[seam.patch1];
  const MetricPatch& P2 = s.patches()[seam.patch2];
  const double t2 = std::clamp(seam.phi.eval(t), 0.0, 1.0);

  DiscAsymReport r;
  r.radii = radii;
  const std::size_t n = radii.size();
  r.area1.resize(n);
  r.area2.resize(n);
  r.area.resize(n);
  parallel_for(2 * n, [&](std::size_t k) {
    const std::size_t i = k % n;
    if (k < n)
      r.area1[i] = boundary_ball_area(P1, seam.arc1, t, radii[i]);
    else
      r.area2[i] = boundary_ball_area(P2, seam.arc2, t2, radii[i]);
  });
  for (std::size_t i = 0; i < n; ++i) r.area[i] = r.area1[i] + r.area2[i];

  // Least squares on area / r^2, i.e. weights 1/r^4 on the areas.
  Eigen::MatrixXd A3(n, 3), A2(n, 2);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = radii[i];
    A3(i, 0) = A2(i, 0) = 1.0;
    A3(i, 1) = A2(i, 1) = ri;
    A3(i, 2) = ri * ri;
    b(i) = r.area[i] / (ri * ri);
  }
  const Eigen::VectorXd c = A3.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd c2 = A2.colPivHouseholderQr().solve(b);
  r.c2 = c(0);
  r.c3 = c(1);
  r.c4 = c(2);
  r.c2_two_term = c2(0);
  r.c3_two_term = c2(1);
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = radii[i];
    r.residuals.push_back(r.area[i] - (r.c2 + r.c3 * ri + r.c4 * ri * ri) * ri * ri);
  }

  const SeamPoint sp = seam_point(s, seam_index, t);
  r.kappa1 = sp.kappa1;
  r.kappa2 = sp.kappa2;
  const double ksum = r.kappa1 + r.kappa2;
  r.predicted_c3_magnitude = std::abs(ksum) / 3.0;
  r.empirical_sign = std::abs(ksum) < 1e-9 ? 0 : (r.c3 * ksum > 0 ? 1 : -1);
  r.c2_rel_error = std::abs(r.c2 - kPi) / kPi;
  r.c3_error = std::abs(3.0 * std::abs(r.c3) - std::abs(ksum));
  r.c2_pass = r.c2_rel_error <= 0.005;
  r.c3_pass = r.c3_error <= 0.02 * std::max(1.0, std::abs(ksum));
  r.pass = r.c2_pass && r.c3_pass;
  return r;
}

// ---------------------------------------------------------------- polyhedra

PolyhedronReport polyhedron_curvature(const std::vector<PolyhedronVertex>& vertices, int chi,
                                      double tol) {
  std::vector<Violation> bad;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string path = idx("polyhedron.vertices", i);
    if (vertices[i].angles.empty()) bad.push_back({path + ".angles", "vertex has no face angles"});
    for (std::size_t j = 0; j < vertices[i].angles.size(); ++j) {
      const double a = vertices[i].angles[j];
      if (!(a > 0 && a < kTwoPi)) bad.push_back({idx(path + ".angles", j), "face angle outside (0, 2pi)"});
    }
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));

  PolyhedronReport r;
  for (const auto& v : vertices) {
    double sum = 0.0;
    for (double a : v.angles) sum += a;
    r.atoms.push_back({v.id, kTwoPi - sum});
    r.total += kTwoPi - sum;
  }
  r.chi = chi;
  r.target = kTwoPi * chi;
  r.defect = std::abs(r.total - r.target);
  r.pass = r.defect <= tol;
  r.note = "angle defects sum to 2*pi*chi; the unnormalized form sum = chi is off by 2*pi";
  return r;
}

}  // namespace curvmeasure

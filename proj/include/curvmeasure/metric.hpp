#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curvmeasure/error.hpp"
#include "curvmeasure/expr.hpp"
#include "curvmeasure/quadrature.hpp"

namespace curvmeasure {

/// Point or tangent vector in patch parameters.
struct Vec2 {
  double u = 0.0;
  double v = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.u + b.u, a.v + b.v}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.u - b.u, a.v - b.v}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.u, s * a.v}; }

enum class DomainKind { Rect, Disc, Triangle };

/// Parameter region of a chart: an axis-aligned rectangle, the closed unit
/// disc, or the standard simplex {u >= 0, v >= 0, u + v <= 1}.
///
/// Every domain also carries a canonical map from [0,1]^2 used for
/// quadrature and for describing sub-regions: affine for rectangles,
/// (radius, angle/2pi) for the disc, and the collapsed square
/// u = s(1 - w), v = s w for the simplex.
struct ParamDomain {
  DomainKind kind = DomainKind::Rect;
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;

  static ParamDomain rect(double u0, double u1, double v0, double v1);
  static ParamDomain disc();
  static ParamDomain triangle();

  /// Nonnegative inside, negative outside; equals the Euclidean distance to
  /// the boundary near the boundary.
  double level(Vec2 p) const;
  double parameter_area() const;
  Vec2 canonical(double s1, double s2, double* jacobian = nullptr) const;
};

struct BoundaryArc {
  std::string id;
  Expr u;  // of t in [0, 1]
  Expr v;

  Vec2 point(double t) const { return {u.eval(t), v.eval(t)}; }
  Vec2 tangent(double t) const;
  Vec2 acceleration(double t) const;
};

/// Named corner at vertex `vertex`, the start point of arc `vertex`.
struct Corner {
  std::string id;
  std::size_t vertex = 0;
};

struct MetricValue {
  double E, F, G;
  double det() const { return E * G - F * F; }
};

struct MetricJets {
  Jet2 E, F, G;
};

/// Christoffel symbols of the second kind, gamma[k][i][j] = Gamma^k_ij.
struct Christoffel {
  double g[2][2][2];
};

/// A smooth Riemannian chart with boundary made of parametrized arcs that
/// traverse the domain boundary once, counterclockwise.
class MetricPatch {
public:
  MetricPatch(std::string id, ParamDomain domain, Expr E, Expr F, Expr G,
              std::vector<BoundaryArc> boundary, std::vector<Corner> corners = {}, int chi = 1);

  const std::string& id() const { return id_; }
  const ParamDomain& domain() const { return domain_; }
  const std::vector<BoundaryArc>& boundary() const { return boundary_; }
  const std::vector<Corner>& corners() const { return corners_; }
  int euler_characteristic() const { return chi_; }
  const Expr& E() const { return E_; }
  const Expr& F() const { return F_; }
  const Expr& G() const { return G_; }

  /// A boundary made of one closed arc with no corner marker.
  bool boundary_is_loop() const { return boundary_.size() == 1 && corners_.empty(); }

  std::optional<std::size_t> arc_index(const std::string& arc_id) const;
  std::optional<std::size_t> corner_vertex(const std::string& corner_id) const;

  MetricValue metric(Vec2 p) const;
  MetricJets jets(Vec2 p) const;
  Christoffel christoffel(Vec2 p) const;

  double dot(Vec2 at, Vec2 a, Vec2 b) const;
  double norm(Vec2 at, Vec2 a) const;
  /// Oriented area form sqrt(EG - F^2) (a x b).
  double area_form(Vec2 at, Vec2 a, Vec2 b) const;
  /// Metric speed |c'(t)|_g of an arc.
  double speed(const BoundaryArc& arc, double t) const;
  /// Unit inward normal at arc(t) (left of the counterclockwise tangent).
  Vec2 inward_normal(const BoundaryArc& arc, double t) const;

  /// Interior angle in (0, 2pi) at a boundary vertex, from one-sided tangents.
  double interior_angle(std::size_t vertex) const;

  /// Checks every invariant; violations are reported under `path`.
  std::vector<Violation> validate(const std::string& path) const;

private:
  std::string id_;
  ParamDomain domain_;
  Expr E_, F_, G_;
  std::vector<BoundaryArc> boundary_;
  std::vector<Corner> corners_;
  int chi_;
};

double gaussian_curvature(const MetricPatch& p, double u, double v);

/// Signed geodesic curvature of the arc with respect to the inward normal;
/// the boundary circle of the flat unit disc has kappa = +1.
double geodesic_curvature(const MetricPatch& p, const BoundaryArc& arc, double t);

double angle_between(const MetricPatch& p, Vec2 at, Vec2 w1, Vec2 w2);

struct GeodesicSample {
  double s;
  Vec2 position;
  Vec2 velocity;
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;  // accepted steps plus requested lengths
  double length = 0.0;

  const GeodesicSample& end() const { return samples.back(); }
  /// Sample recorded exactly at requested length `s`.
  const GeodesicSample& at(double s) const;
  double max_speed_deviation(const MetricPatch& p) const;
};

struct GeodesicOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double exit_tol = 1e-10;
  std::vector<double> sample_lengths;
};

/// Arclength-parametrized geodesic from `start` in `direction` (any nonzero
/// length; it is normalized). Throws LeftDomain if the domain is exited.
GeodesicPath shoot_geodesic(const MetricPatch& p, Vec2 start, Vec2 direction, double length,
                            const GeodesicOptions& opt = {});

/// Outcome of following a geodesic ray while tracking the Jacobi field
/// J'' + K J = 0, J(0) = 0, J'(0) = 1.
struct RayTrace {
  bool exited = false;
  double length = 0.0;       // where the ray stopped (max length or boundary)
  double jacobi_area = 0.0;  // integral of J ds over [0, length]
  Vec2 end;
};

RayTrace trace_ray(const MetricPatch& p, Vec2 start, Vec2 unit_direction, double max_length,
                   double rtol = 1e-12, double exit_tol = 1e-13);

/// Sub-rectangle [s1a, s1b] x [s2a, s2b] of the canonical square.
struct CanonicalRect {
  double s1a = 0, s1b = 1, s2a = 0, s2b = 1;
};

using AreaIntegrand = std::function<double(double u, double v)>;

/// Integral of f dA over a canonical sub-rectangle of the patch.
QuadResult integrate_area(const MetricPatch& p, const AreaIntegrand& f, CanonicalRect region = {},
                          double tol = 1e-8);

/// Integral of f(t) ds along an arc over [t0, t1].
QuadResult integrate_boundary(const MetricPatch& p, const BoundaryArc& arc,
                              const std::function<double(double t)>& f, double t0 = 0.0,
                              double t1 = 1.0, double tol = 1e-8);

}  // namespace curvmeasure

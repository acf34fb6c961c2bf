#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvmeasure/metric.hpp"

namespace curvmeasure {

enum class Orientation { Preserving, Reversing };

struct ArcRef {
  std::string patch;
  std::string arc;
};

/// Identification of two boundary arcs: side1's parameter t in [0, 1] is
/// glued to side2's parameter phi(t).
struct SeamSpec {
  std::string id;
  ArcRef side1;
  ArcRef side2;
  Expr phi;  // variable u
  std::optional<Orientation> orientation;
};

struct ConeCornerSpec {
  std::string patch;
  std::string corner;
  std::optional<double> theta;  // cross-checked against the computed angle
};

struct ConePointSpec {
  std::string id;
  std::vector<ConeCornerSpec> cycle;
};

struct Seam {
  std::string id;
  std::size_t patch1 = 0, arc1 = 0;
  std::size_t patch2 = 0, arc2 = 0;
  Expr phi;
  Orientation orientation = Orientation::Preserving;
  bool loop = false;       // both sides are closed single-arc boundaries
  double length1 = 0.0;    // metric length of side1
  double length2 = 0.0;
};

struct ConeCorner {
  std::size_t patch = 0;
  std::size_t vertex = 0;
  std::string corner;
  double theta = 0.0;  // interior angle in the patch
};

struct ConePoint {
  std::string id;
  std::vector<ConeCorner> cycle;

  double angle_sum() const;
  /// Atomic curvature 2pi - sum of the corner angles.
  double mass() const;
};

/// Boundary point of the glued surface where arc endpoints meet (a corner
/// of the free boundary, possibly shared by several patches).
struct BoundaryJunction {
  std::vector<ConeCorner> corners;
  double angle_sum() const;
};

struct FreeArc {
  std::size_t patch = 0;
  std::size_t arc = 0;
};

/// The seam side1 point, side2 point, one-sided geodesic curvatures and the
/// arclength speeds ds1/dt and ds2/dt (the latter includes |phi'|).
struct SeamPoint {
  Vec2 point1, point2;
  double kappa1 = 0.0, kappa2 = 0.0;
  double speed1 = 0.0, speed2 = 0.0;
  double phi = 0.0;
};

class GluedSurface {
public:
  const std::vector<MetricPatch>& patches() const { return patches_; }
  const std::vector<Seam>& seams() const { return seams_; }
  const std::vector<ConePoint>& cone_points() const { return cone_points_; }
  const std::vector<FreeArc>& free_boundary() const { return free_boundary_; }
  const std::vector<BoundaryJunction>& boundary_junctions() const { return boundary_junctions_; }
  bool closed() const { return free_boundary_.empty(); }

  std::size_t patch_index(const std::string& id) const;
  std::size_t seam_index(const std::string& id) const;
  std::size_t cone_index(const std::string& id) const;

  int euler_characteristic() const { return chi_; }

private:
  friend GluedSurface build(std::vector<MetricPatch>, std::vector<SeamSpec>,
                            std::vector<ConePointSpec>);
  std::vector<MetricPatch> patches_;
  std::vector<Seam> seams_;
  std::vector<ConePoint> cone_points_;
  std::vector<FreeArc> free_boundary_;
  std::vector<BoundaryJunction> boundary_junctions_;
  int chi_ = 0;
};

/// Validates and assembles a glued surface. Throws ValidationError listing
/// every violated invariant.
GluedSurface build(std::vector<MetricPatch> patches, std::vector<SeamSpec> seams,
                   std::vector<ConePointSpec> cone_points);

/// chi = sum chi(M_j) + V - E over the identification complex: each glued
/// open arc removes one duplicate edge and each junction of k patch
/// vertices removes k - 1 duplicate points; closed seam loops contribute 0.
int euler_characteristic(const GluedSurface& s);

SeamPoint seam_point(const GluedSurface& s, std::size_t seam, double t);

}  // namespace curvmeasure

#pragma once

#include <string>
#include <vector>

#include "curvmeasure/gluing.hpp"

namespace curvmeasure {

/// A region of a glued surface: canonical sub-rectangles of patches,
/// parameter sub-intervals of seams (side1's parameter) and cone points.
struct Region {
  struct PatchPart {
    std::size_t patch = 0;
    CanonicalRect rect;
  };
  struct SeamPart {
    std::size_t seam = 0;
    double t0 = 0.0, t1 = 1.0;
  };
  std::vector<PatchPart> patches;
  std::vector<SeamPart> seams;
  std::vector<std::size_t> cones;

  static Region all(const GluedSurface& s);
  std::vector<Violation> validate(const GluedSurface& s) const;
};

struct Atom {
  std::string id;
  double mass = 0.0;
};

struct PartTotal {
  double value = 0.0;
  double error = 0.0;
};

/// mu_K = K dA on patches + rho(t) dt on seams + point masses at cone points.
class CurvatureMeasure {
public:
  CurvatureMeasure(GluedSurface s, double tol);

  const GluedSurface& surface() const { return surface_; }

  double density(std::size_t patch, double u, double v) const;
  /// rho(t) = kappa1 |c1'(t)| + kappa2 |c2'(phi(t))| |phi'(t)|.
  double seam_density(std::size_t seam, double t) const;
  const std::vector<Atom>& atoms() const { return atoms_; }

  const std::vector<PartTotal>& patch_totals() const { return patch_totals_; }
  const std::vector<PartTotal>& seam_totals() const { return seam_totals_; }
  PartTotal ac_total() const;
  PartTotal seam_total() const;
  double atom_total() const;
  PartTotal total() const;

private:
  GluedSurface surface_;
  std::vector<Atom> atoms_;
  std::vector<PartTotal> patch_totals_;
  std::vector<PartTotal> seam_totals_;
};

CurvatureMeasure compute_curvature_measure(const GluedSurface& s, double tol = 1e-10);

struct MeasureValue {
  double ac = 0.0;
  double seam = 0.0;
  double atoms = 0.0;
  double total = 0.0;
  double error = 0.0;
};

MeasureValue measure_of(const CurvatureMeasure& m, const Region& r, double tol = 1e-9);

struct GaussBonnetReport {
  double ac = 0.0, seam = 0.0, atoms = 0.0;
  double total = 0.0;
  int chi = 0;
  bool closed = true;
  /// Free-boundary geodesic curvature and turning at free corners.
  double boundary_term = 0.0;
  double target = 0.0;  // 2 pi chi - boundary_term
  double defect = 0.0;
  double error_bound = 0.0;
  double tol = 0.0;
  bool pass = false;
};

GaussBonnetReport verify_gauss_bonnet(const CurvatureMeasure& m, double tol = 1e-5);

struct QuadSide {
  double a_x = 0.0, a_y = 0.0;  // angles at the far ends of the perpendiculars
  double nu = 0.0;              // integral of kappa ds along the seam arc
  double mu = 0.0;              // mu_K of the quadrilateral interior
  double mu_error = 0.0;
  double connect_miss = 0.0;
  double connect_length = 0.0;
};

struct QuadReport {
  QuadSide side1, side2;
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
  double angle_value = 0.0;  // a11 + a12 + a21 + a22 - 2 pi
  double measure_value = 0.0;  // nu1(A) + nu2(A) + mu(N1) + mu(N2)
  double defect = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Geodesic quadrilaterals on both sides of the seam arc between t_x and
/// t_y. lengths = {side1 at x, side1 at y, side2 at x, side2 at y}.
QuadReport quadrilateral_angle_check(const GluedSurface& s, std::size_t seam, double t_x,
                                     double t_y, const std::vector<double>& lengths,
                                     double tol = 1e-5);

struct LengthInvarianceReport {
  std::vector<double> lengths;
  std::vector<double> side1_sums, side2_sums;
  std::vector<double> defects;
  double spread1 = 0.0, spread2 = 0.0;
  bool flat = false;  // spreads are asserted only on flat patches
  double tol = 0.0;
  bool pass = false;
};

LengthInvarianceReport length_invariance_check(const GluedSurface& s, std::size_t seam, double t_x,
                                               double t_y, const std::vector<double>& lengths,
                                               double tol = 1e-7, double identity_tol = 1e-5);

struct DiscAsymReport {
  std::vector<double> radii;
  std::vector<double> area1, area2, area;
  std::vector<double> residuals;  // area - fitted model
  double c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double c2_two_term = 0.0, c3_two_term = 0.0;
  double kappa1 = 0.0, kappa2 = 0.0;
  double predicted_c3_magnitude = 0.0;  // |kappa1 + kappa2| / 3
  int empirical_sign = 0;               // sign of c3 relative to kappa1 + kappa2
  double c2_rel_error = 0.0;
  double c3_error = 0.0;  // |3|c3| - |kappa1 + kappa2||
  bool c2_pass = false, c3_pass = false, pass = false;
};

DiscAsymReport disc_area_asymptotics(const GluedSurface& s, std::size_t seam, double t,
                                     const std::vector<double>& radii);

/// Area of the metric ball of radius r about a boundary point, restricted to
/// the patch.
double boundary_ball_area(const MetricPatch& p, std::size_t arc, double t, double r,
                          double tol = 1e-13);

struct PolyhedronVertex {
  std::string id;
  std::vector<double> angles;
};

struct PolyhedronReport {
  std::vector<Atom> atoms;
  double total = 0.0;
  int chi = 0;
  double target = 0.0;  // 2 pi chi
  double defect = 0.0;
  bool pass = false;
  std::string note;
};

PolyhedronReport polyhedron_curvature(const std::vector<PolyhedronVertex>& vertices, int chi,
                                      double tol = 1e-9);

}  // namespace curvmeasure

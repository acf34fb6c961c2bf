#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curvmeasure/curvature.hpp"
#include "curvmeasure/error.hpp"
#include "curvmeasure/quadrature.hpp"
#include "support.hpp"

using namespace curvmeasure;
using testing_support::load;

namespace {

constexpr double kPi = std::numbers::pi;

// Area between the equator and the great circle through the points at
// latitude h above longitudes 0 and delta.
double saccheri_area(double h, double delta) {
  const double half = delta / 2;
  return integrate_1d(
             [&](double lam) {
               const double lat = std::atan(std::tan(h) * std::cos(lam - half) / std::cos(half));
               return std::sin(lat);
             },
             0, delta, {.tol = 1e-14})
      .value;
}

std::vector<double> radii() {
  std::vector<double> r;
  for (int i = 0; i < 8; ++i) r.push_back(0.02 * std::pow(5.0, i / 7.0));
  return r;
}

}  // namespace

TEST_SUITE("curvature") {
  TEST_CASE("parts of the measure") {
    const CurvatureMeasure dd = compute_curvature_measure(load("double_disc"));
    CHECK(dd.ac_total().value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(dd.seam_total().value == doctest::Approx(4 * kPi).epsilon(1e-12));
    const CurvatureMeasure hh = compute_curvature_measure(load("two_hemispheres"));
    CHECK(hh.ac_total().value == doctest::Approx(4 * kPi).epsilon(1e-10));
    CHECK(std::abs(hh.seam_total().value) < 1e-10);
    const CurvatureMeasure dh = compute_curvature_measure(load("disc_hemisphere"));
    CHECK(dh.ac_total().value == doctest::Approx(2 * kPi).epsilon(1e-10));
    CHECK(dh.seam_total().value == doctest::Approx(2 * kPi).epsilon(1e-10));
    const CurvatureMeasure sq = compute_curvature_measure(load("double_square"));
    REQUIRE(sq.atoms().size() == 4);
    for (const auto& a : sq.atoms()) CHECK(a.mass == doctest::Approx(kPi).epsilon(1e-14));
    const CurvatureMeasure tri = compute_curvature_measure(load("double_triangle"));
    for (const auto& a : tri.atoms()) CHECK(a.mass == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
  }

  TEST_CASE("Gauss-Bonnet on every bundled surface") {
    for (const char* name : {"double_square", "double_disc", "two_hemispheres", "disc_hemisphere",
                             "double_triangle", "flat_strip", "four_squares", "cube_patches"}) {
      const GaussBonnetReport r = verify_gauss_bonnet(compute_curvature_measure(load(name)));
      CHECK_MESSAGE(r.pass, name << " defect " << r.defect);
      CHECK(r.defect <= 1e-9);
    }
  }

  TEST_CASE("measure of regions is additive") {
    const CurvatureMeasure dd = compute_curvature_measure(load("double_disc"));
    const GluedSurface& s = dd.surface();
    Region half;
    half.seams.push_back({0, 0.0, 0.5});
    CHECK(measure_of(dd, half).total == doctest::Approx(2 * kPi).epsilon(1e-12));
    CHECK(measure_of(dd, Region{}).total == 0.0);
    CHECK(measure_of(dd, Region::all(s)).total == doctest::Approx(4 * kPi).epsilon(1e-12));

    const CurvatureMeasure hh = compute_curvature_measure(load("two_hemispheres"));
    Region left, right, both;
    left.patches.push_back({0, {0, 0.5, 0, 1}});
    right.patches.push_back({0, {0.5, 1, 0, 1}});
    both.patches.push_back({0, {0, 1, 0, 1}});
    const double l = measure_of(hh, left).total, r = measure_of(hh, right).total;
    CHECK(l + r == doctest::Approx(measure_of(hh, both).total).epsilon(1e-10));
    CHECK(measure_of(hh, both).total == doctest::Approx(2 * kPi).epsilon(1e-10));

    Region bad;
    bad.seams.push_back({7, 0, 1});
    CHECK_THROWS_AS(measure_of(dd, bad), ValidationError);
  }

  TEST_CASE("quadrilateral identity on flat and round seams") {
    const QuadReport flat = quadrilateral_angle_check(load("flat_strip"), 0, 0.25, 0.75, {0.1, 0.2, 0.1, 0.3});
    CHECK(flat.pass);
    CHECK(flat.defect <= 1e-10);
    CHECK(flat.side1.nu == doctest::Approx(0.0).scale(1.0));

    const GluedSurface dd = load("double_disc");
    for (double arc : {0.02, 0.05, 0.1}) {
      const QuadReport q = quadrilateral_angle_check(dd, 0, 0.3, 0.3 + arc, {0.1, 0.1, 0.1, 0.1});
      CHECK(q.pass);
      CHECK(q.side1.nu == doctest::Approx(2 * kPi * arc).epsilon(1e-10));
      CHECK(q.side1.mu == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("hemisphere quadrilaterals match spherical geometry") {
    const double h = 0.05, tx = 0.1, ty = 0.15;
    const QuadReport q = quadrilateral_angle_check(load("two_hemispheres"), 0, tx, ty, {h, h, h, h});
    const double expected = saccheri_area(h, 2 * kPi * (ty - tx));
    CHECK(q.side1.mu == doctest::Approx(expected).epsilon(1e-9));
    CHECK(q.side2.mu == doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(q.side1.nu) < 1e-10);
    // Top angles of a spherical Saccheri quadrilateral exceed pi/2 by half its area.
    CHECK(q.side1.a_x == doctest::Approx(kPi / 2 + expected / 2).epsilon(1e-8));
    CHECK(q.pass);
  }

  TEST_CASE("length invariance on flat seams") {
    const LengthInvarianceReport li = length_invariance_check(load("double_disc"), 0, 0.2, 0.25, {0.05, 0.1, 0.2});
    CHECK(li.flat);
    CHECK(li.spread1 <= 1e-7);
    CHECK(li.spread2 <= 1e-7);
    CHECK(li.pass);
    const LengthInvarianceReport round = length_invariance_check(load("two_hemispheres"), 0, 0.2, 0.25, {0.02, 0.05});
    CHECK_FALSE(round.flat);
  }

  TEST_CASE("ball areas against closed forms") {
    const GluedSurface dd = load("double_disc");
    const MetricPatch& p = dd.patches()[0];
    // Flat half-disc cut by a circle of radius 1: lens area of two unit-radius
    // and r-radius circles at distance 1.
    for (double r : {0.05, 0.3}) {
      const double lens = r * r * std::acos(r / 2) + std::acos(1 - r * r / 2) - 0.5 * r * std::sqrt(4 - r * r);
      CHECK(boundary_ball_area(p, 0, 0.4, r) == doctest::Approx(lens).epsilon(1e-11));
    }
  }

  TEST_CASE("disc asymptotics on the seam examples") {
    struct Case {
      const char* name;
      double kappa_sum;
    };
    for (const Case c : {Case{"double_disc", 2.0}, Case{"disc_hemisphere", 1.0}, Case{"two_hemispheres", 0.0}}) {
      const DiscAsymReport r = disc_area_asymptotics(load(c.name), 0, 0.5, radii());
      INFO(c.name);
      CHECK(r.kappa1 + r.kappa2 == doctest::Approx(c.kappa_sum).scale(1.0).epsilon(1e-10));
      CHECK(std::abs(r.c2 - kPi) / kPi <= 0.005);
      CHECK(std::abs(3 * std::abs(r.c3) - c.kappa_sum) <= 0.02 * std::max(1.0, c.kappa_sum));
      CHECK(r.pass);
    }
    CHECK_THROWS_AS(disc_area_asymptotics(load("double_disc"), 0, 0.5, {0.02, 0.021, 0.022, 0.023}), FitIllConditioned);
    CHECK_THROWS_AS(disc_area_asymptotics(load("double_disc"), 0, 0.5, {0.02, 0.05}), FitIllConditioned);
  }

  TEST_CASE("polyhedra") {
    auto regular = [](int n, double angle, int faces) {
      return std::vector<PolyhedronVertex>(n, PolyhedronVertex{"v", std::vector<double>(faces, angle)});
    };
    CHECK(polyhedron_curvature(regular(8, kPi / 2, 3), 2).total == doctest::Approx(4 * kPi));
    CHECK(polyhedron_curvature(regular(4, kPi / 3, 3), 2).pass);
    CHECK(polyhedron_curvature(regular(12, kPi / 3, 5), 2).pass);  // icosahedron
    CHECK(polyhedron_curvature(regular(20, 3 * kPi / 5, 3), 2).pass);  // dodecahedron
    const PolyhedronReport wrong = polyhedron_curvature(regular(8, kPi / 2, 3), 0);
    CHECK_FALSE(wrong.pass);
    CHECK_THROWS_AS(polyhedron_curvature({{"v", {-1.0, 1.0}}}, 2), ValidationError);
  }
}

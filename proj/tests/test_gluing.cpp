#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "curvmeasure/error.hpp"
#include "curvmeasure/gluing.hpp"
#include "support.hpp"

using namespace curvmeasure;
using testing_support::load;

TEST_SUITE("gluing") {
  TEST_CASE("Euler characteristic of the bundled surfaces") {
    const std::map<std::string, int> chi = {{"double_square", 2},   {"double_disc", 2},  {"two_hemispheres", 2},
                                            {"disc_hemisphere", 2}, {"double_triangle", 2}, {"flat_strip", 1},
                                            {"four_squares", 1},    {"cube_patches", 2}};
    for (const auto& [name, expected] : chi) {
      const GluedSurface s = load(name);
      CHECK_MESSAGE(s.euler_characteristic() == expected, name);
      CHECK(euler_characteristic(s) == expected);
    }
  }

  TEST_CASE("closedness and free boundary") {
    CHECK(load("double_square").closed());
    const GluedSurface strip = load("flat_strip");
    CHECK_FALSE(strip.closed());
    CHECK(strip.free_boundary().size() == 6);
    CHECK(strip.boundary_junctions().size() == 6);
    const GluedSurface four = load("four_squares");
    CHECK(four.free_boundary().size() == 8);
    CHECK(four.cone_points().size() == 1);
  }

  TEST_CASE("cone points collect their corner angles") {
    const GluedSurface cube = load("cube_patches");
    REQUIRE(cube.cone_points().size() == 8);
    for (const auto& c : cube.cone_points()) {
      CHECK(c.cycle.size() == 3);
      CHECK(c.angle_sum() == doctest::Approx(1.5 * std::numbers::pi).epsilon(1e-12));
      CHECK(c.mass() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    }
    const GluedSurface four = load("four_squares");
    CHECK(four.cone_points()[0].mass() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }

  TEST_CASE("seam points follow the identification map") {
    const GluedSurface strip = load("flat_strip");
    const std::size_t k = strip.seam_index("mid");
    for (double t : {0.0, 0.2, 0.5, 1.0}) {
      const SeamPoint sp = seam_point(strip, k, t);
      CHECK(sp.phi == doctest::Approx(1 - t));
      CHECK(sp.point1.u == doctest::Approx(1.0));
      CHECK(sp.point1.v == doctest::Approx(t));
      CHECK(sp.point2.u == doctest::Approx(1.0));
      CHECK(sp.point2.v == doctest::Approx(t));  // B's left arc runs downward
      CHECK(sp.kappa1 == doctest::Approx(0.0).scale(1.0));
      CHECK(sp.speed2 == doctest::Approx(1.0));
    }
    const GluedSurface dd = load("double_disc");
    const SeamPoint r = seam_point(dd, 0, 0.3);
    CHECK(r.kappa1 == doctest::Approx(1.0));
    CHECK(r.kappa2 == doctest::Approx(1.0));
    CHECK(r.speed1 == doctest::Approx(2 * std::numbers::pi));
    CHECK(dd.seams()[0].loop);
    CHECK(dd.seams()[0].length1 == doctest::Approx(2 * std::numbers::pi));
  }

  TEST_CASE("lookups reject unknown ids") {
    const GluedSurface s = load("double_square");
    CHECK_THROWS_AS(s.seam_index("nope"), ValidationError);
    CHECK_THROWS_AS(s.patch_index("nope"), ValidationError);
    CHECK_THROWS_AS(s.cone_index("nope"), ValidationError);
  }

  TEST_CASE("subdividing a square does not change chi") {
    // One unit square vs the same square cut into four quarters.
    const SurfaceDocument whole = parse_surface(R"({"version": 1, "patches": [{"id": "Q", "domain": {"type": "rect", "bounds": [0, 1, 0, 1]},
      "metric": {"E": "1", "F": "0", "G": "1"}, "boundary": [
        {"id": "a", "curve": {"u": "t", "v": "0"}, "corners": [{"id": "c0", "at": "start"}]},
        {"id": "b", "curve": {"u": "1", "v": "t"}, "corners": [{"id": "c1", "at": "start"}]},
        {"id": "c", "curve": {"u": "1-t", "v": "1"}, "corners": [{"id": "c2", "at": "start"}]},
        {"id": "d", "curve": {"u": "0", "v": "1-t"}, "corners": [{"id": "c3", "at": "start"}]}]}]})");
    CHECK(build(whole).euler_characteristic() == load("four_squares").euler_characteristic());
  }
}

TEST_SUITE("surface_file") {
  TEST_CASE("malformed corpus reports precise paths") {
    const std::map<std::string, std::string> first_path = {
        {"arc_glued_twice", "seams[4].side1.arc"},
        {"arc_off_boundary", "patches[0].boundary[0].curve"},
        {"bad_domain_type", "patches[0].domain.type"},
        {"chi_not_integer", "patches[0].chi"},
        {"clockwise_boundary", "patches[0].boundary"},
        {"cone_incomplete_cycle", "cone_points[1].cycle"},
        {"cone_theta_mismatch", "cone_points[0].cycle[0].theta"},
        {"cone_unknown_corner", "cone_points[2].cycle[0].corner"},
        {"curve_uses_u", "patches[0].boundary[0].curve.u"},
        {"duplicate_patch_id", "patches[1].id"},
        {"empty", "$"},
        {"expr_syntax", "patches[0].metric.E"},
        {"expr_unknown_identifier", "patches[1].metric.G"},
        {"indefinite_metric", "patches[0].metric"},
        {"missing_cone_point", "cone_points"},
        {"missing_metric", "patches[0].metric"},
        {"not_an_object", "$"},
        {"orientation_mismatch", "seams[0].orientation"},
        {"phi_not_onto", "seams[0].phi"},
        {"phi_squared", "seams[0].phi"},
        {"polyhedron_bad_angle", "polyhedron.vertices[0].angles[0]"},
        {"rect_without_bounds", "patches[0].domain.bounds"},
        {"seams_not_array", "seams"},
        {"truncated_json", "$"},
        {"unknown_arc_ref", "seams[0].side1.arc"},
        {"unknown_field", "patches[0].metric.H"},
        {"unknown_patch_ref", "seams[0].side2.patch"},
        {"unknown_top_level", "comment"},
        {"wrong_version", "version"},
    };
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(testing_support::data_dir() / "malformed")) {
      const std::string name = entry.path().stem().string();
      ++seen;
      INFO(name);
      REQUIRE(first_path.count(name));
      try {
        const SurfaceDocument doc = load_surface(entry.path());
        if (doc.polyhedron) polyhedron_curvature(doc.polyhedron->vertices, doc.polyhedron->chi);
        build(doc);
        FAIL("no error raised");
      } catch (const ValidationError& e) {
        REQUIRE_FALSE(e.violations().empty());
        CHECK(e.violations().front().path == first_path.at(name));
      }
    }
    CHECK(seen == first_path.size());
  }

  TEST_CASE("numbers may be constant expressions") {
    const SurfaceDocument d = load_surface(testing_support::data_dir() / "surfaces" / "cube.json");
    REQUIRE(d.polyhedron);
    CHECK(d.polyhedron->vertices[0].angles[0] == doctest::Approx(std::numbers::pi / 2));
    CHECK(d.patches.empty());
  }

  TEST_CASE("regions") {
    const GluedSurface s = load("double_square");
    const Region all = parse_region(s, "all");
    CHECK(all.patches.size() == 2);
    CHECK(all.seams.size() == 4);
    CHECK(all.cones.size() == 4);
    const Region mixed = parse_region(s, "seam:top:0:pi/8; cone:v1; patch:A:0:0.5:0:1; none");
    CHECK(mixed.seams.size() == 1);
    CHECK(mixed.seams[0].t1 == doctest::Approx(std::numbers::pi / 8));
    CHECK(mixed.cones.size() == 1);
    CHECK(mixed.patches[0].rect.s1b == 0.5);
    CHECK(parse_region(s, "none").patches.empty());
    CHECK_THROWS_AS(parse_region(s, "seam:top:0.5:0.2"), ValidationError);
    CHECK_THROWS_AS(parse_region(s, "seam:nope"), ValidationError);
    CHECK_THROWS_AS(parse_region(s, "blob"), ValidationError);
  }
}

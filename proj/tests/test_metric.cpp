#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curvmeasure/error.hpp"
#include "curvmeasure/metric.hpp"
#include "curvmeasure/quadrature.hpp"

using namespace curvmeasure;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<BoundaryArc> unit_circle() {
  return {{"rim", Expr::parse("cos(2*pi*t)", {"t"}), Expr::parse("sin(2*pi*t)", {"t"})}};
}

// Spherical cap of polar radius 2 atan(rho), in scaled stereographic coordinates.
MetricPatch cap(double rho) {
  const std::string r2 = std::to_string(rho * rho);
  const std::string g = "4*" + r2 + "/(1+" + r2 + "*(u^2+v^2))^2";
  return MetricPatch("cap", ParamDomain::disc(), Expr::parse(g), Expr::parse("0"), Expr::parse(g), unit_circle());
}

MetricPatch poincare() {
  const std::string g = "4/(1-u^2-v^2)^2";
  return MetricPatch("h", ParamDomain::disc(), Expr::parse(g), Expr::parse("0"), Expr::parse(g), unit_circle());
}

MetricPatch flat_disc() {
  return MetricPatch("d", ParamDomain::disc(), Expr::parse("1"), Expr::parse("0"), Expr::parse("1"), unit_circle());
}

MetricPatch triangle_patch(const char* F) {
  auto t = [](const char* s) { return Expr::parse(s, {"t"}); };
  return MetricPatch("tri", ParamDomain::triangle(), Expr::parse("1"), Expr::parse(F), Expr::parse("1"),
                     {{"e0", t("t"), t("0")}, {"e1", t("1-t"), t("t")}, {"e2", t("0"), t("1-t")}},
                     {{"c0", 0}, {"c1", 1}, {"c2", 2}});
}

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    for (int n : {1, 2, 5, 10, 32, 64}) {
      const GaussRule r = gauss_legendre(n);
      REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
      for (int deg = 0; deg <= 2 * n - 1 && deg <= 20; ++deg) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
        const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
        CHECK(s == doctest::Approx(exact).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("adaptive 1d handles endpoint singularities") {
    const QuadResult r = integrate_1d([](double x) { return std::sqrt(x); }, 0, 1, {.tol = 1e-12});
    CHECK(r.value == doctest::Approx(2.0 / 3).epsilon(1e-11));
    CHECK(r.error <= 1e-10);
    const QuadResult o = integrate_1d([](double x) { return std::sin(50 * x); }, 0, kPi, {.tol = 1e-12});
    CHECK(o.value == doctest::Approx((1 - std::cos(50 * kPi)) / 50).epsilon(1e-10));
  }

  TEST_CASE("adaptive 2d") {
    const QuadResult r = integrate_2d([](double x, double y) { return std::exp(x + y); }, 0, 1, 0, 2, {.tol = 1e-12});
    CHECK(r.value == doctest::Approx((std::exp(1) - 1) * (std::exp(2) - 1)).epsilon(1e-12));
  }
}

TEST_SUITE("metric") {
  TEST_CASE("Gaussian curvature of model metrics") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> x(-0.6, 0.6);
    const MetricPatch sphere = cap(1.0), hyp = poincare();
    const MetricPatch warped("w", ParamDomain::rect(1, 2, 0, 1), Expr::parse("1"), Expr::parse("0"),
                             Expr::parse("u^2"),
                             {{"a", Expr::parse("1+t", {"t"}), Expr::parse("0", {"t"})},
                              {"b", Expr::parse("2", {"t"}), Expr::parse("t", {"t"})},
                              {"c", Expr::parse("2-t", {"t"}), Expr::parse("1", {"t"})},
                              {"d", Expr::parse("1", {"t"}), Expr::parse("1-t", {"t"})}});
    // Surface of revolution ds^2 = du^2 + sin(u)^2 dv^2 is the unit sphere.
    const MetricPatch rev("r", ParamDomain::rect(0.5, 2.5, 0, 1), Expr::parse("1"), Expr::parse("0"),
                          Expr::parse("sin(u)^2"),
                          {{"a", Expr::parse("0.5+2*t", {"t"}), Expr::parse("0", {"t"})},
                           {"b", Expr::parse("2.5", {"t"}), Expr::parse("t", {"t"})},
                           {"c", Expr::parse("2.5-2*t", {"t"}), Expr::parse("1", {"t"})},
                           {"d", Expr::parse("0.5", {"t"}), Expr::parse("1-t", {"t"})}});
    for (int k = 0; k < 20; ++k) {
      const double u = x(rng), v = x(rng);
      CHECK(gaussian_curvature(sphere, u, v) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(gaussian_curvature(hyp, u, v) == doctest::Approx(-1.0).epsilon(1e-12));
      CHECK(std::abs(gaussian_curvature(warped, 1.5 + 0.5 * u, 0.5 + 0.5 * v)) < 1e-12);
      CHECK(gaussian_curvature(rev, 1.5 + u, 0.5 + v) == doctest::Approx(1.0).epsilon(1e-11));
    }
  }

  TEST_CASE("geodesic curvature of latitude circles") {
    CHECK(geodesic_curvature(flat_disc(), flat_disc().boundary()[0], 0.3) == doctest::Approx(1.0));
    for (double rho : {0.3, 1.0, 1.7}) {
      const MetricPatch p = cap(rho);
      const double theta = 2 * std::atan(rho);
      for (double t : {0.0, 0.37, 0.9})
        CHECK(geodesic_curvature(p, p.boundary()[0], t) == doctest::Approx(1 / std::tan(theta)).epsilon(1e-10));
    }
  }

  TEST_CASE("single-patch Gauss-Bonnet on caps") {
    for (double rho : {0.4, 1.0, 2.5}) {
      const MetricPatch p = cap(rho);
      const double theta = 2 * std::atan(rho);
      const QuadResult area = integrate_area(p, [](double, double) { return 1.0; }, {}, 1e-11);
      CHECK(area.value == doctest::Approx(2 * kPi * (1 - std::cos(theta))).epsilon(1e-9));
      const QuadResult kint = integrate_area(p, [&](double u, double v) { return gaussian_curvature(p, u, v); }, {}, 1e-11);
      const QuadResult kappa = integrate_boundary(
          p, p.boundary()[0], [&](double t) { return geodesic_curvature(p, p.boundary()[0], t); }, 0, 1, 1e-12);
      CHECK(kint.value + kappa.value == doctest::Approx(2 * kPi).epsilon(1e-9));
    }
  }

  TEST_CASE("angles under a skew metric") {
    const MetricPatch eq = triangle_patch("1/2");
    CHECK(angle_between(eq, {0.3, 0.3}, {1, 0}, {0, 1}) == doctest::Approx(kPi / 3));
    for (std::size_t k = 0; k < 3; ++k) CHECK(eq.interior_angle(k) == doctest::Approx(kPi / 3).epsilon(1e-12));
    const MetricPatch right = triangle_patch("0");
    CHECK(right.interior_angle(0) == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(right.interior_angle(1) == doctest::Approx(kPi / 4).epsilon(1e-12));
  }

  TEST_CASE("radial geodesics on the sphere") {
    const MetricPatch p = cap(1.0);
    GeodesicOptions opt;
    opt.sample_lengths = {0.5, 1.0};
    const GeodesicPath g = shoot_geodesic(p, {0, 0}, {1, 1}, 1.2, opt);
    for (double s : {0.5, 1.0}) {
      const Vec2 q = g.at(s).position;
      CHECK(std::hypot(q.u, q.v) == doctest::Approx(std::tan(s / 2)).epsilon(1e-9));
      CHECK(q.u == doctest::Approx(q.v).epsilon(1e-12));
    }
    CHECK(g.max_speed_deviation(p) < 1e-8);
    CHECK_THROWS_AS(shoot_geodesic(p, {0, 0}, {1, 0}, 2.0), LeftDomain);
    CHECK_THROWS_AS(shoot_geodesic(p, {0, 0}, {0, 0}, 0.5), ZeroVector);
  }

  TEST_CASE("Jacobi fields") {
    const RayTrace flat = trace_ray(flat_disc(), {0, 0}, {1, 0}, 0.5);
    CHECK_FALSE(flat.exited);
    CHECK(flat.jacobi_area == doctest::Approx(0.125).epsilon(1e-12));
    const RayTrace out = trace_ray(flat_disc(), {0.5, 0}, {1, 0}, 2.0);
    CHECK(out.exited);
    CHECK(out.length == doctest::Approx(0.5).epsilon(1e-10));
    const MetricPatch s = cap(1.0);
    const RayTrace sph = trace_ray(s, {0, 0}, {0.5, 0}, 1.0);  // unit in the metric at the origin
    CHECK(sph.jacobi_area == doctest::Approx(1 - std::cos(1.0)).epsilon(1e-10));
  }

  TEST_CASE("patch validation") {
    CHECK(flat_disc().validate("p").empty());
    const MetricPatch bad("b", ParamDomain::disc(), Expr::parse("1"), Expr::parse("2"), Expr::parse("1"), unit_circle());
    const auto v = bad.validate("patches[0]");
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].path == "patches[0].metric");
    const MetricPatch cw("c", ParamDomain::disc(), Expr::parse("1"), Expr::parse("0"), Expr::parse("1"),
                         {{"rim", Expr::parse("cos(2*pi*t)", {"t"}), Expr::parse("-sin(2*pi*t)", {"t"})}});
    CHECK_FALSE(cw.validate("p").empty());
  }
}

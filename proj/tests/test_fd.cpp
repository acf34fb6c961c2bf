#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvmeasure/error.hpp"
#include "curvmeasure/fd_eigen.hpp"

using namespace curvmeasure;

namespace {

constexpr double kPi = std::numbers::pi;

// Dirichlet eigenvalues of the 5-point Laplacian on the unit square with n
// cells per side.
std::vector<double> five_point(int n, int count) {
  const double h = 1.0 / n;
  std::vector<double> v;
  for (int m = 1; m < n; ++m)
    for (int k = 1; k < n; ++k)
      v.push_back(4 / (h * h) * (std::pow(std::sin(m * kPi * h / 2), 2) + std::pow(std::sin(k * kPi * h / 2), 2)));
  std::sort(v.begin(), v.end());
  v.resize(count);
  return v;
}

}  // namespace

TEST_SUITE("fd") {
  TEST_CASE("lumped P1 on the square is the 5-point Laplacian") {
    const FdResult r = fd_eigenvalues(DomainSpec::square(), BoundaryCondition::Dirichlet, 24, 12);
    const auto exact = five_point(24, 12);
    REQUIRE(r.eigenvalues.size() == 12);
    for (int i = 0; i < 12; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(exact[i]).scale(1.0).epsilon(1e-8));
  }

  TEST_CASE("approaches the exact spectra") {
    for (auto d : {DomainSpec::square(), DomainSpec::equilateral(), DomainSpec::isosceles_right(), DomainSpec::rectangle(1, 1.5)}) {
      const FdResult r = fd_eigenvalues(d, BoundaryCondition::Double, 48, 10);
      const auto exact = spectrum(d, BoundaryCondition::Double, 1500);
      for (int i = 0; i < 10; ++i) {
        const double tol = exact[i] == 0 ? 1e-8 : 0.02 * exact[i];
        CHECK(std::abs(r.eigenvalues[i] - exact[i]) <= tol);
      }
    }
  }

  TEST_CASE("repeated eigenvalues are resolved") {
    const FdResult r = fd_eigenvalues(DomainSpec::square(), BoundaryCondition::Dirichlet, 32, 6);
    CHECK(r.eigenvalues[1] == doctest::Approx(r.eigenvalues[2]).epsilon(1e-9));
    CHECK(r.eigenvalues[2] < r.eigenvalues[3] * 0.9);
  }

  TEST_CASE("preconditions") {
    CHECK_THROWS_AS(fd_eigenvalues(DomainSpec::disc(), BoundaryCondition::Dirichlet, 32, 5), ValidationError);
    CHECK_THROWS_AS(fd_eigenvalues(DomainSpec::square(), BoundaryCondition::Dirichlet, 8, 5), ValidationError);
    CHECK_THROWS_AS(fd_eigenvalues(DomainSpec::square(), BoundaryCondition::Dirichlet, 16, 65), ValidationError);
    FdOptions tight;
    tight.max_iterations = 1;
    CHECK_THROWS_AS(fd_eigenvalues(DomainSpec::square(), BoundaryCondition::Neumann, 16, 4, tight), ConvergenceFailure);
  }
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvmeasure/gluing.hpp"

namespace curvmeasure {

enum class Shape { Rectangle, Equilateral, IsoscelesRight, Disc };
enum class BoundaryCondition { Dirichlet, Neumann, Double };

/// Rectangle a x b, equilateral triangle of side a, isosceles right triangle
/// with legs a, or disc of radius a.
struct DomainSpec {
  Shape shape = Shape::Rectangle;
  double a = 1.0;
  double b = 1.0;

  static DomainSpec rectangle(double a, double b) { return {Shape::Rectangle, a, b}; }
  static DomainSpec square(double a = 1.0) { return {Shape::Rectangle, a, a}; }
  static DomainSpec equilateral(double side = 1.0) { return {Shape::Equilateral, side, side}; }
  static DomainSpec isosceles_right(double leg = 1.0) { return {Shape::IsoscelesRight, leg, leg}; }
  static DomainSpec disc(double radius = 1.0) { return {Shape::Disc, radius, radius}; }

  /// Parses "square", "rectangle", "equilateral", "isosceles-right", "disc"
  /// with sizes {a} or {a, b}.
  static DomainSpec parse(const std::string& name, const std::vector<double>& size);
  std::string name() const;

  double area() const;
  double perimeter() const;
};

BoundaryCondition parse_boundary_condition(const std::string& s);
std::string to_string(BoundaryCondition bc);

/// Eigenvalues <= t_max in nondecreasing order, repeated by multiplicity.
std::vector<double> rectangle_spectrum(double a, double b, BoundaryCondition bc, double t_max);
std::vector<double> triangle_spectrum(Shape kind, double size, BoundaryCondition bc, double t_max);
std::vector<double> disc_spectrum(double radius, BoundaryCondition bc, double t_max);
std::vector<double> spectrum(const DomainSpec& d, BoundaryCondition bc, double t_max);
/// Spectrum of the double: the merged Dirichlet and Neumann spectra.
std::vector<double> double_spectrum(const DomainSpec& d, double t_max);

/// N(t) = #{lambda <= t} on a sorted spectrum.
std::size_t counting(const std::vector<double>& sorted, double t);

struct EigenvalueGroup {
  double value;
  std::size_t multiplicity;
};
/// Collapses bitwise-equal neighbours.
std::vector<EigenvalueGroup> group_multiplicities(const std::vector<double>& sorted);

/// The double of the domain as a glued surface of two flat patches.
GluedSurface double_surface(const DomainSpec& d);

struct ConstantMode {
  enum class Kind { Paper, Corner, Custom };
  Kind kind = Kind::Paper;
  double custom = 0.0;

  /// "paper", "corner" or "custom:<c>".
  static ConstantMode parse(const std::string& s);
  std::string to_string() const;
};

/// Constant term of the modified counting function of the double.
/// paper: the total curvature mu_K(M); corner: the heat-invariant constant
/// (smooth curvature)/(12 pi) + sum over cones (4 pi^2 - g^2)/(24 pi g);
/// custom: the given value.
double counting_constant(const DomainSpec& d, const ConstantMode& mode);

/// N~(t) = Area(M) t / (4 pi) + c with Area(M) twice the domain area.
double modified_counting(const DomainSpec& d, double t, const ConstantMode& mode);

/// A(t) = (1/t) int_0^t (N(s) - alpha s - c) ds, in closed form.
class AverageError {
public:
  AverageError(std::vector<double> sorted_spectrum, double alpha, double c);
  double operator()(double t) const;
  double count(double t) const;

private:
  std::vector<double> spectrum_;
  std::vector<long double> prefix_;  // prefix_[k] = sum of the first k eigenvalues
  double alpha_;
  double c_;
};

struct CountingRow {
  double t;
  double n;
  double ntilde;
  double diff;
  double a;
};

struct ConjectureOptions {
  double t_min = 10.0;
  std::size_t grid = 2000;
  std::size_t bootstrap = 400;
  std::uint64_t seed = 20240917;
};

struct CountingReport {
  DomainSpec domain;
  ConstantMode mode;
  double constant = 0.0;
  double t_max = 0.0;
  std::size_t eigenvalue_count = 0;
  std::vector<CountingRow> rows;
  double c0 = 0.0;          // mean of A over the top decade
  double c0_stderr = 0.0;   // bootstrap standard error
  double tail_std = 0.0;    // oscillation scale of A in the top decade
  double p = 0.0;           // decay exponent of the envelope of |A - c0|
  double p_lo = 0.0, p_hi = 0.0;  // bootstrap 95% interval
  double fit_decades = 0.0;
  bool quarter_in_interval = false;
  bool consistent = false;   // p >= 0.20
  bool constant_mismatch = false;  // |c0| > 3 tail_std
};

CountingReport conjecture_test(const DomainSpec& d, double t_max, const ConstantMode& mode,
                               const ConjectureOptions& opt = {});

struct ResidualRow {
  double t;
  double n;
  double residual;        // N - Area t/(4 pi) -+ boundary term
  double scaled;          // residual / sqrt(t)
  double uncorrected;     // (N - Area t/(4 pi)) / sqrt(t)
};

/// For Dirichlet/Neumann the boundary term L sqrt(t)/(4 pi) is added back
/// (resp. subtracted); for the double it cancels and only the area term is
/// removed, with Area the area of the double.
std::vector<ResidualRow> weyl_ivrii_residuals(const DomainSpec& d, BoundaryCondition bc,
                                              const std::vector<double>& t_grid);

}  // namespace curvmeasure

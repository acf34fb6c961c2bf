#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvmeasure {

// Base of every error the library raises. Numerical-machinery failures and
// input-validation failures are separated so the CLI can map them to exit
// codes without string matching.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

class SyntaxError : public InputError {
public:
  SyntaxError(std::size_t position, std::string expected, const std::string& source)
      : InputError("syntax error at position " + std::to_string(position) + ": expected " +
                   expected + " in \"" + source + "\""),
        position_(position), expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

private:
  std::size_t position_;
  std::string expected_;
};

class UnknownIdentifier : public InputError {
public:
  UnknownIdentifier(std::string name, std::size_t position)
      : InputError("unknown identifier '" + name + "' at position " + std::to_string(position)),
        name_(std::move(name)), position_(position) {}

  const std::string& name() const noexcept { return name_; }
  std::size_t position() const noexcept { return position_; }

private:
  std::string name_;
  std::size_t position_;
};

class DomainError : public NumericalError {
public:
  DomainError(std::string function, double argument)
      : NumericalError("domain error in " + function + " at argument " + std::to_string(argument)),
        function_(std::move(function)), argument_(argument) {}

  const std::string& function() const noexcept { return function_; }
  double argument() const noexcept { return argument_; }

private:
  std::string function_;
  double argument_;
};

class DegenerateMetric : public NumericalError {
public:
  DegenerateMetric(double u, double v, double det)
      : NumericalError("degenerate metric at (" + std::to_string(u) + ", " + std::to_string(v) +
                       "): EG - F^2 = " + std::to_string(det)) {}
};

class DegenerateCurve : public NumericalError {
public:
  explicit DegenerateCurve(double t)
      : NumericalError("degenerate curve: zero metric speed at t = " + std::to_string(t)) {}
};

class ZeroVector : public NumericalError {
public:
  ZeroVector() : NumericalError("zero tangent vector") {}
};

class LeftDomain : public NumericalError {
public:
  explicit LeftDomain(double at_length)
      : NumericalError("geodesic left the patch domain at length " + std::to_string(at_length)),
        at_length_(at_length) {}

  double at_length() const noexcept { return at_length_; }

private:
  double at_length_;
};

class ToleranceNotMet : public NumericalError {
public:
  ToleranceNotMet(double estimate, double error_bound)
      : NumericalError("quadrature budget exhausted: estimate " + std::to_string(estimate) +
                       " +/- " + std::to_string(error_bound)),
        estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

private:
  double estimate_;
  double error_bound_;
};

class NoConnectingGeodesic : public NumericalError {
public:
  explicit NoConnectingGeodesic(double miss)
      : NumericalError("no connecting geodesic found (endpoint miss " + std::to_string(miss) + ")") {}
};

class FitIllConditioned : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class OutOfValidatedRange : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class ConvergenceFailure : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class InsufficientRange : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// One violated invariant, located by a dotted path such as
/// `seams[2].phi` or `patches[0].boundary[1].curve`.
struct Violation {
  std::string path;
  std::string message;
};

class ValidationError : public InputError {
public:
  explicit ValidationError(std::vector<Violation> violations)
      : InputError(render(violations)), violations_(std::move(violations)) {}

  ValidationError(std::string path, std::string message)
      : ValidationError(std::vector<Violation>{{std::move(path), std::move(message)}}) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
  static std::string render(const std::vector<Violation>& vs) {
    std::string out = "validation failed:";
    for (const auto& v : vs) out += "\n  " + v.path + ": " + v.message;
    return out;
  }

  std::vector<Violation> violations_;
};

}  // namespace curvmeasure

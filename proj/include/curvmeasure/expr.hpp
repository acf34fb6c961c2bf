#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "curvmeasure/jet.hpp"

namespace curvmeasure {

/// Scalar expression of up to two variables, parsed once and evaluated many
/// times. Immutable after construction, so evaluation is safe from many
/// threads at once.
///
/// Grammar (highest precedence first): `^` (right-associative), unary `-`,
/// `*` `/`, `+` `-`. Functions: sin cos tan exp log sqrt sinh cosh atan atan2
/// abs. Constants: pi, e.
class Expr {
public:
  enum class Op : std::uint8_t {
    Number,
    Variable,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Atan,
    Atan2,
    Abs,
  };

  struct Node {
    Op op = Op::Number;
    double number = 0.0;
    int var = 0;  // slot index for Op::Variable
    int lhs = -1;
    int rhs = -1;
  };

  /// Parse `source`; `variables` names the slots (at most two). Variables
  /// are `u, v` for metric coefficients, `u` for identification maps and
  /// `t` for boundary curves.
  static Expr parse(std::string_view source, std::vector<std::string> variables = {"u", "v"});

  /// Convenience for constants.
  static Expr constant(double c);

  double eval(double x, double y = 0.0) const;

  /// Value, gradient and Hessian at (x, y) by second-order forward-mode AD.
  Jet2 eval_jet2(double x, double y = 0.0) const;

  /// Minimal-parenthesis rendering that re-parses to an equal tree.
  std::string to_string() const;

  const std::string& source() const { return source_; }
  const std::vector<std::string>& variables() const { return variables_; }

  /// True when the expression does not mention any variable.
  bool is_constant() const;

  /// Structural equality of the trees (variable names compared by slot).
  bool same_tree(const Expr& other) const;

private:
  friend class ExprParser;
  std::string source_;
  std::vector<std::string> variables_;
  std::shared_ptr<const std::vector<Node>> nodes_;
  int root_ = -1;
};

}  // namespace curvmeasure
